//! EPCS version-1 golden fixtures. The fixture files were packed by a
//! separate script from the documented layout; they must never change.

use num_complex::Complex64;
use polariton::snapshot::{decode, encode, read_snapshot, write_snapshot, HEADER_LEN};
use polariton::{Dim, Error, Grid, ModelTag, SimState};

const CNRP1_1D: &[u8] = include_bytes!("fixtures/cnrp1_1d_v1.epcs");
const HINRP_2D: &[u8] = include_bytes!("fixtures/hinrp_2d_v1.epcs");

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cnrp1_state() -> SimState {
    let grid = Grid::line(3, 2.0).unwrap();
    let z = c(0.0, 0.0);
    SimState::new(
        ModelTag::Cnrp1,
        grid,
        0.5,
        vec![vec![z, c(1.5, -0.25), z], vec![z, c(0.125, 2.0), z]],
        None,
    )
    .unwrap()
}

fn hinrp_state() -> SimState {
    let grid = Grid::square(3, 3, 1.0, 1.0).unwrap();
    let psi = (0..9).map(|k| c(k as f64 * 0.25, 0.0 - k as f64 * 0.5)).collect();
    let n_r = (0..9).map(|k| k as f64 + 0.5).collect();
    SimState::new(ModelTag::Hinrp, grid, 2.0, vec![psi], Some(n_r)).unwrap()
}

#[test]
fn writer_matches_fixtures_byte_for_byte() {
    assert_eq!(encode(&cnrp1_state()), CNRP1_1D);
    assert_eq!(encode(&hinrp_state()), HINRP_2D);
}

#[test]
fn reader_parses_fixtures() {
    let s = decode(CNRP1_1D).unwrap();
    assert_eq!(s, cnrp1_state());
    assert_eq!((s.grid.ndim, s.grid.nx, s.grid.ny, s.grid.dx), (Dim::One, 3, 1, 1.0));

    let s = read_snapshot(HINRP_2D).unwrap();
    assert_eq!(s, hinrp_state());
    assert_eq!(s.reservoir.as_ref().unwrap()[8], 8.5);
}

#[test]
fn fixture_sizes_follow_layout() {
    // header + two complex fields named psi_c/psi_x over 3 nodes
    assert_eq!(CNRP1_1D.len(), HEADER_LEN + 2 * (1 + 4 + 5 + 3 * 16));
    // header + complex psi and real n_R over 9 nodes
    assert_eq!(HINRP_2D.len(), HEADER_LEN + (1 + 4 + 3 + 9 * 16) + (1 + 4 + 3 + 9 * 8));
}

#[test]
fn stream_round_trip() {
    let s = hinrp_state();
    let mut buf = Vec::new();
    let n = write_snapshot(&s, &mut buf).unwrap();
    assert_eq!(n, buf.len());
    assert_eq!(read_snapshot(buf.as_slice()).unwrap(), s);
}

#[test]
fn corrupted_fixture_is_rejected() {
    let mut bad = CNRP1_1D.to_vec();
    bad[0] = b'X';
    assert!(matches!(decode(&bad), Err(Error::BadMagic(m)) if &m == b"XPCS"));
    assert!(matches!(decode(&HINRP_2D[..HINRP_2D.len() - 8]), Err(Error::Truncated(_))));
}
