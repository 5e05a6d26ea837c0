//! Uniform 1D/2D meshes, the fields sampled on them, and the second-order
//! central-difference Laplacian.
//!
//! Layout: 2D fields are stored row-major with x fastest, so node `(i, j)`
//! lives at `j * nx + i`. Node `i` sits at `x_i = (i - (nx - 1)/2) * dx`,
//! which puts the mesh center at the origin and makes mirrored coordinates
//! exact negatives of each other.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Rows below this size are not worth farming out to the thread pool.
const PAR_MIN_NODES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    pub fn as_usize(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }

    pub fn from_usize(n: usize) -> Result<Self> {
        match n {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            _ => Err(Error::InvalidGrid(format!("ndim must be 1 or 2, got {n}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Field pinned to zero at both ends; ghost values beyond the ends are 0.
    DirichletZero,
    /// Indices wrap modulo the node count.
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub ndim: Dim,
    pub nx: usize,
    /// 1 for 1D grids.
    pub ny: usize,
    /// μm
    pub dx: f64,
    /// μm; 0 for 1D grids.
    pub dy: f64,
    pub bc_x: Boundary,
    pub bc_y: Boundary,
}

impl Grid {
    /// Builds a centered mesh with Dirichlet-zero x ends and (in 2D) a periodic y axis.
    ///
    /// `ny` and `cavsize_y` are ignored for 1D grids.
    pub fn new(ndim: Dim, nx: usize, ny: usize, cavsize_x: f64, cavsize_y: f64) -> Result<Self> {
        if nx < 3 {
            return Err(Error::InvalidGrid(format!("nx = {nx}; the stencil needs at least 3 nodes")));
        }
        if !(cavsize_x > 0.0) || !cavsize_x.is_finite() {
            return Err(Error::InvalidGrid(format!("cavsize_x = {cavsize_x} must be positive")));
        }
        let dx = cavsize_x / (nx - 1) as f64;
        match ndim {
            Dim::One => Ok(Grid {
                ndim,
                nx,
                ny: 1,
                dx,
                dy: 0.0,
                bc_x: Boundary::DirichletZero,
                bc_y: Boundary::Periodic,
            }),
            Dim::Two => {
                if ny < 3 {
                    return Err(Error::InvalidGrid(format!(
                        "ny = {ny}; the stencil needs at least 3 nodes"
                    )));
                }
                if !(cavsize_y > 0.0) || !cavsize_y.is_finite() {
                    return Err(Error::InvalidGrid(format!("cavsize_y = {cavsize_y} must be positive")));
                }
                Ok(Grid {
                    ndim,
                    nx,
                    ny,
                    dx,
                    dy: cavsize_y / (ny - 1) as f64,
                    bc_x: Boundary::DirichletZero,
                    bc_y: Boundary::Periodic,
                })
            }
        }
    }

    pub fn line(nx: usize, cavsize_x: f64) -> Result<Self> {
        Self::new(Dim::One, nx, 1, cavsize_x, 0.0)
    }

    pub fn square(nx: usize, ny: usize, cavsize_x: f64, cavsize_y: f64) -> Result<Self> {
        Self::new(Dim::Two, nx, ny, cavsize_x, cavsize_y)
    }

    /// Rebuilds a grid from stored spacings (snapshot headers carry dx, dy).
    pub fn from_spacing(ndim: Dim, nx: usize, ny: usize, dx: f64, dy: f64) -> Result<Self> {
        let grid = match ndim {
            Dim::One => Grid::line(nx, dx * (nx.max(2) - 1) as f64)?,
            Dim::Two => Grid::square(nx, ny, dx * (nx.max(2) - 1) as f64, dy * (ny.max(2) - 1) as f64)?,
        };
        Ok(Grid { dx, dy: if ndim == Dim::One { 0.0 } else { dy }, ..grid })
    }

    /// Overrides the boundary tags. Only used for oracle problems that need a
    /// translation-invariant x axis; simulations keep the defaults.
    pub fn with_boundaries(mut self, bc_x: Boundary, bc_y: Boundary) -> Self {
        self.bc_x = bc_x;
        self.bc_y = bc_y;
        self
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cavsize_x(&self) -> f64 {
        self.dx * (self.nx - 1) as f64
    }

    pub fn cavsize_y(&self) -> f64 {
        match self.ndim {
            Dim::One => 0.0,
            Dim::Two => self.dy * (self.ny - 1) as f64,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - (self.nx - 1) as f64 / 2.0) * self.dx
    }

    pub fn y(&self, j: usize) -> f64 {
        match self.ndim {
            Dim::One => 0.0,
            Dim::Two => (j as f64 - (self.ny - 1) as f64 / 2.0) * self.dy,
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y(j)).collect()
    }

    /// Coordinates of the node at flat index `k`.
    pub fn position(&self, k: usize) -> [f64; 2] {
        [self.x(k % self.nx), self.y(k / self.nx)]
    }

    /// Area (2D) or length (1D) weight of one node in Riemann sums.
    pub fn cell_measure(&self) -> f64 {
        match self.ndim {
            Dim::One => self.dx,
            Dim::Two => self.dx * self.dy,
        }
    }

    /// Whether node `k` sits on a Dirichlet-pinned boundary.
    pub fn is_pinned(&self, k: usize) -> bool {
        match self.bc_x {
            Boundary::DirichletZero => {
                let i = k % self.nx;
                i == 0 || i == self.nx - 1
            }
            Boundary::Periodic => false,
        }
    }

    /// Flat indices of Dirichlet-pinned nodes.
    pub fn pinned_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        let pinned = self.bc_x == Boundary::DirichletZero;
        (0..self.ny)
            .flat_map(move |j| [j * self.nx, j * self.nx + self.nx - 1])
            .filter(move |_| pinned)
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if n != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: n });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        grid.check_len(values.len())?;
        Ok(ComplexField { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        ComplexField { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let values = (0..grid.len())
            .map(|k| {
                let [x, y] = grid.position(k);
                f(x, y)
            })
            .collect();
        ComplexField { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.grid.nx + i]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        grid.check_len(values.len())?;
        Ok(RealField { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        RealField { grid, values: vec![0.0; grid.len()] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|k| {
                let [x, y] = grid.position(k);
                f(x, y)
            })
            .collect();
        RealField { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Second difference along x of a 1D field.
pub fn laplacian_1d(f: &ComplexField) -> Result<ComplexField> {
    if f.grid.ndim != Dim::One {
        return Err(Error::DimensionMismatch { expected: 1, found: f.grid.ndim.as_usize() });
    }
    f.grid.check_len(f.values.len())?;
    let mut out = ComplexField::zeros(f.grid);
    laplacian_into(&f.grid, &f.values, &mut out.values);
    Ok(out)
}

/// Sum of the x and y second differences of a 2D field.
pub fn laplacian_2d(f: &ComplexField) -> Result<ComplexField> {
    if f.grid.ndim != Dim::Two {
        return Err(Error::DimensionMismatch { expected: 2, found: f.grid.ndim.as_usize() });
    }
    f.grid.check_len(f.values.len())?;
    let mut out = ComplexField::zeros(f.grid);
    laplacian_into(&f.grid, &f.values, &mut out.values);
    Ok(out)
}

pub fn laplacian(f: &ComplexField) -> Result<ComplexField> {
    match f.grid.ndim {
        Dim::One => laplacian_1d(f),
        Dim::Two => laplacian_2d(f),
    }
}

/// Writes the discrete Laplacian of `src` into `dst`.
///
/// Each node is evaluated as `((left + right) - 2 c) / dx² [+ ((down + up) - 2 c) / dy²]`.
/// The grouping is fixed: it makes the operator bit-exactly mirror symmetric,
/// and rows are independent so the parallel path matches the serial one.
pub(crate) fn laplacian_into(grid: &Grid, src: &[Complex64], dst: &mut [Complex64]) {
    debug_assert_eq!(src.len(), grid.len());
    debug_assert_eq!(dst.len(), grid.len());
    let nx = grid.nx;
    let zero = Complex64::new(0.0, 0.0);
    let dx2 = grid.dx * grid.dx;
    let dy2 = grid.dy * grid.dy;
    let periodic_x = grid.bc_x == Boundary::Periodic;

    let row_kernel = |j: usize, out: &mut [Complex64]| {
        let row = &src[j * nx..(j + 1) * nx];
        let (up, down) = match grid.ndim {
            Dim::One => (None, None),
            Dim::Two => {
                let ny = grid.ny;
                let jd = if j == 0 { ny - 1 } else { j - 1 };
                let ju = if j + 1 == ny { 0 } else { j + 1 };
                (Some(&src[ju * nx..(ju + 1) * nx]), Some(&src[jd * nx..(jd + 1) * nx]))
            }
        };
        for i in 0..nx {
            let c = row[i];
            let l = if i > 0 {
                row[i - 1]
            } else if periodic_x {
                row[nx - 1]
            } else {
                zero
            };
            let r = if i + 1 < nx {
                row[i + 1]
            } else if periodic_x {
                row[0]
            } else {
                zero
            };
            let mut v = ((l + r) - c * 2.0) / dx2;
            if let (Some(u), Some(d)) = (up, down) {
                v += ((d[i] + u[i]) - c * 2.0) / dy2;
            }
            out[i] = v;
        }
    };

    if grid.len() >= PAR_MIN_NODES && grid.ny > 1 {
        dst.par_chunks_mut(nx).enumerate().for_each(|(j, out)| row_kernel(j, out));
    } else {
        dst.chunks_mut(nx).enumerate().for_each(|(j, out)| row_kernel(j, out));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn table_meshes_have_expected_spacing() {
        let g = Grid::line(201, 100.0).unwrap();
        assert_eq!(g.dx, 0.5);
        assert_eq!(g.ny, 1);
        assert_eq!(g.x(0), -50.0);
        assert_eq!(g.x(200), 50.0);

        let g = Grid::square(241, 241, 24.0, 24.0).unwrap();
        assert!((g.dx - 0.1).abs() < 1e-15);
        assert!((g.dy - 0.1).abs() < 1e-15);
        assert!((g.x(0) + 12.0).abs() < 1e-12);
        assert_eq!(g.x(120), 0.0);
    }

    #[test]
    fn smallest_legal_mesh() {
        let g = Grid::line(3, 2.0).unwrap();
        assert_eq!(g.dx, 1.0);
        assert_eq!(g.xs(), vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn rejects_degenerate_meshes() {
        assert!(matches!(Grid::line(2, 1.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::line(10, 0.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::line(10, -3.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::square(10, 2, 1.0, 1.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::square(10, 10, 1.0, 0.0), Err(Error::InvalidGrid(_))));
        assert!(Dim::from_usize(3).is_err());
    }

    #[test]
    fn mirrored_nodes_are_exact_negatives() {
        for n in [3, 4, 201, 241] {
            let g = Grid::line(n, 37.3).unwrap();
            for i in 0..n {
                assert_eq!(g.x(i), -g.x(n - 1 - i));
            }
        }
    }

    #[test]
    fn constant_has_zero_interior_laplacian() {
        let g = Grid::line(11, 5.0).unwrap();
        let f = ComplexField::from_fn(g, |_, _| Complex64::new(2.5, -1.0));
        let l = laplacian_1d(&f).unwrap();
        for v in &l.values[1..10] {
            assert_eq!(*v, c(0.0));
        }
        // ghost values are zero, so the ends see -c/dx²
        assert_eq!(l.values[0], -f.values[0] / (g.dx * g.dx));
    }

    #[test]
    fn quadratic_is_differentiated_exactly() {
        for (n, size) in [(201, 100.0), (17, 3.0), (5, 1.0)] {
            let g = Grid::line(n, size).unwrap();
            let f = ComplexField::from_fn(g, |x, _| c(x * x));
            let l = laplacian_1d(&f).unwrap();
            for v in &l.values[1..n - 1] {
                assert!((v.re - 2.0).abs() < 1e-9, "{v}");
                assert_eq!(v.im, 0.0);
            }
        }
    }

    #[test]
    fn sine_error_within_fourth_derivative_bound() {
        let g = Grid::line(201, 100.0).unwrap();
        let k = 2.0 * std::f64::consts::PI / g.cavsize_x();
        let f = ComplexField::from_fn(g, |x, _| c((k * x).sin()));
        let l = laplacian_1d(&f).unwrap();
        let bound = k.powi(4) * g.dx * g.dx / 12.0;
        for i in 1..g.nx - 1 {
            let exact = -k * k * (k * g.x(i)).sin();
            assert!((l.values[i].re - exact).abs() <= bound * (1.0 + 1e-9));
        }
    }

    #[test]
    fn separable_quadratic_in_2d() {
        let g = Grid::square(21, 13, 4.0, 3.0).unwrap();
        let f = ComplexField::from_fn(g, |x, _| c(x * x));
        let l = laplacian_2d(&f).unwrap();
        for j in 0..g.ny {
            for i in 1..g.nx - 1 {
                assert!((l.at(i, j).re - 2.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn constant_2d_vanishes_off_x_boundary() {
        let g = Grid::square(9, 7, 4.0, 3.0).unwrap();
        let f = ComplexField::from_fn(g, |_, _| Complex64::new(1.0, 1.0));
        let l = laplacian_2d(&f).unwrap();
        for j in 0..g.ny {
            for i in 1..g.nx - 1 {
                assert_eq!(l.at(i, j), c(0.0));
            }
        }
    }

    #[test]
    fn y_periodic_eigenfunction() {
        // lattice period in y is ny*dy under modulo-ny wrapping
        let g = Grid::square(5, 64, 4.0, 12.0).unwrap();
        let k = 2.0 * std::f64::consts::PI / (g.ny as f64 * g.dy);
        let f = ComplexField::from_fn(g, |_, y| c((k * y).sin()));
        let l = laplacian_2d(&f).unwrap();
        // exact discrete eigenvalue of the 3-point stencil
        let lam = -4.0 / (g.dy * g.dy) * (k * g.dy / 2.0).sin().powi(2);
        for j in 0..g.ny {
            let got = l.at(2, j).re;
            assert!((got - lam * f.at(2, j).re).abs() < 1e-10);
            assert!((got + k * k * f.at(2, j).re).abs() < k.powi(4) * g.dy * g.dy / 12.0 + 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let g1 = Grid::line(5, 1.0).unwrap();
        let g2 = Grid::square(5, 5, 1.0, 1.0).unwrap();
        assert!(matches!(
            laplacian_2d(&ComplexField::zeros(g1)),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
        assert!(matches!(
            laplacian_1d(&ComplexField::zeros(g2)),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
        assert!(ComplexField::new(g1, vec![c(0.0); 4]).is_err());
    }

    #[test]
    fn parallel_rows_match_serial_evaluation() {
        let g = Grid::square(81, 77, 8.0, 7.6).unwrap();
        assert!(g.len() >= PAR_MIN_NODES);
        let f = ComplexField::from_fn(g, |x, y| Complex64::new((x * 1.3).sin() * y, (y * 0.7).cos() + x));
        let par = laplacian_2d(&f).unwrap();
        let (dx2, dy2) = (g.dx * g.dx, g.dy * g.dy);
        let get = |i: isize, j: isize| -> Complex64 {
            if i < 0 || i >= g.nx as isize {
                return c(0.0);
            }
            let j = j.rem_euclid(g.ny as isize) as usize;
            f.at(i as usize, j)
        };
        for j in 0..g.ny as isize {
            for i in 0..g.nx as isize {
                let ctr = get(i, j);
                let v = ((get(i - 1, j) + get(i + 1, j)) - ctr * 2.0) / dx2
                    + ((get(i, j - 1) + get(i, j + 1)) - ctr * 2.0) / dy2;
                assert_eq!(par.at(i as usize, j as usize), v);
            }
        }
    }

    fn field_1d(vals: Vec<(f64, f64)>) -> ComplexField {
        let g = Grid::line(vals.len(), 7.0).unwrap();
        ComplexField::new(g, vals.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn laplacian_is_linear(
            a in -3.0f64..3.0, b in -3.0f64..3.0,
            f in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 12),
            h in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 12),
        ) {
            let f = field_1d(f);
            let h = field_1d(h);
            let comb = ComplexField::new(
                f.grid,
                f.values.iter().zip(&h.values).map(|(x, y)| x * a + y * b).collect(),
            ).unwrap();
            let lf = laplacian_1d(&f).unwrap();
            let lh = laplacian_1d(&h).unwrap();
            let lc = laplacian_1d(&comb).unwrap();
            for k in 0..lc.values.len() {
                let expect = lf.values[k] * a + lh.values[k] * b;
                prop_assert!((lc.values[k] - expect).norm() < 1e-9);
            }
        }

        #[test]
        fn mirror_equivariance_is_exact(f in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..40)) {
            let f = field_1d(f);
            let mut rev = f.clone();
            rev.values.reverse();
            let mut l = laplacian_1d(&f).unwrap().values;
            l.reverse();
            prop_assert_eq!(laplacian_1d(&rev).unwrap().values, l);
        }

        #[test]
        fn y_shift_commutes_with_laplacian(
            vals in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6 * 5),
        ) {
            let g = Grid::square(6, 5, 2.0, 3.0).unwrap();
            let f = ComplexField::new(g, vals.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap();
            let shift = |v: &[Complex64]| -> Vec<Complex64> {
                (0..g.len()).map(|k| {
                    let (i, j) = (k % g.nx, k / g.nx);
                    v[((j + g.ny - 1) % g.ny) * g.nx + i]
                }).collect()
            };
            let shifted = ComplexField::new(g, shift(&f.values)).unwrap();
            let lhs = laplacian_2d(&shifted).unwrap().values;
            let rhs = shift(&laplacian_2d(&f).unwrap().values);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
