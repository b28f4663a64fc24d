/* tslint:disable */
/* eslint-disable */

/**
 * Regularized sums over `eps = 10^lo .. 10^hi`, largest first.
 */
export function eps_sweep(p: number, q: number, lo: number, hi: number, per_decade: number): string;

/**
 * Partial sums of `exp(2 pi i q k^2 / n)` for `k = 0..n`, plus the closed form
 * when `n` is an odd prime.
 */
export function gauss_walk(n: number, q: number): string;

/**
 * Closed-form p-adic Gauss integral next to the finite oracle.
 */
export function padic_integral(p: number, a: string, b: string, precision: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly eps_sweep: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly gauss_walk: (a: number, b: number) => [number, number];
    readonly padic_integral: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
