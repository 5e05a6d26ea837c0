/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_heatmap_free: (a: number, b: number) => void;
export const cflRatio: (a: number, b: number, c: number) => [number, number, number];
export const fieldFromNanowatts: (a: number, b: number, c: number) => [number, number, number];
export const heatmap_density: (a: number) => [number, number];
export const heatmap_field: (a: number) => [number, number];
export const heatmap_frames: (a: number) => number;
export const heatmap_nx: (a: number) => number;
export const heatmap_onsetTime: (a: number) => number;
export const heatmap_peakNumber: (a: number) => number;
export const heatmap_times: (a: number) => [number, number];
export const heatmap_xs: (a: number) => [number, number];
export const runSpacetime: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
