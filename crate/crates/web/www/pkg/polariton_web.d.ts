/* tslint:disable */
/* eslint-disable */

export class Heatmap {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Row-major `frames × nx` densities.
     */
    density(): Float64Array;
    times(): Float64Array;
    xs(): Float64Array;
    readonly field: string;
    readonly frames: number;
    readonly nx: number;
    /**
     * Onset time in ps, or NaN when the number never grows.
     */
    readonly onsetTime: number;
    readonly peakNumber: number;
}

export function cflRatio(preset: string, h: number): number;

export function fieldFromNanowatts(nanowatts: number, size: number, two_d: boolean): number;

export function runSpacetime(model: string, g_ratio: number, drive: number, t_end: number, frames: number): Heatmap;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_heatmap_free: (a: number, b: number) => void;
    readonly cflRatio: (a: number, b: number, c: number) => [number, number, number];
    readonly fieldFromNanowatts: (a: number, b: number, c: number) => [number, number, number];
    readonly heatmap_density: (a: number) => [number, number];
    readonly heatmap_field: (a: number) => [number, number];
    readonly heatmap_frames: (a: number) => number;
    readonly heatmap_nx: (a: number) => number;
    readonly heatmap_onsetTime: (a: number) => number;
    readonly heatmap_peakNumber: (a: number) => number;
    readonly heatmap_times: (a: number) => [number, number];
    readonly heatmap_xs: (a: number) => [number, number];
    readonly runSpacetime: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
