/* tslint:disable */
/* eslint-disable */

/**
 * Region of a valuation, given as comma-separated rationals in clock
 * order, and its status in every location.
 */
export function classify(src: string, valuation: string, forcing: boolean): string;

/**
 * The bundled example models, keyed by name.
 */
export function presets(): string;

/**
 * Samples the plane of the first two clocks (others held at zero) with
 * `steps` points per time unit, for one location. Returns the codes row
 * by row, y growing.
 */
export function region_map(src: string, location: string, steps: number, forcing: boolean): string;

/**
 * Supervisor text and final predicates as JSON.
 */
export function synthesize(src: string, forcing: boolean, invariant_feedback: boolean): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly classify: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly presets: () => [number, number];
    readonly region_map: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly synthesize: (a: number, b: number, c: number, d: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
