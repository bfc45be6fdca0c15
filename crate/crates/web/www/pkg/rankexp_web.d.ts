/* tslint:disable */
/* eslint-disable */

/**
 * Exact widths, distance-hereditary test and obstructions.
 */
export function characterize(text: string): string;

/**
 * Rank-expansion of the graph with its checked bounds.
 */
export function expand(text: string, linear: boolean): string;

/**
 * Normalized drawing and edge list of the input.
 */
export function graph(text: string): string;

export function local_complement(text: string, v: string): string;

/**
 * Pivot on the edge `u v`.
 */
export function pivot(text: string, u: string, v: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly characterize: (a: number, b: number) => [number, number, number, number];
    readonly expand: (a: number, b: number, c: number) => [number, number, number, number];
    readonly graph: (a: number, b: number) => [number, number, number, number];
    readonly local_complement: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly pivot: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
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
