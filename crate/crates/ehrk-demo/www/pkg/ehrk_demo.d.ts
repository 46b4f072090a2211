/* tslint:disable */
/* eslint-disable */

/**
 * Full analysis of a q-spec like `"2^7,5^5"`: reflexivity, ell, h*, g,
 * Kronecker status, factorizations, and the Ehrhart polynomial.
 */
export function analyze(qspec: string): string;

/**
 * Instantiate a closed-form family. Parameter meaning per family:
 * case0: (a, c1, c2) with x = (a*c1 - 1, c2); case1: (a, k, c);
 * case2/case3: (a, c, -); s532-1: (-, -, -); s532-2/s532-3: (c, -, -);
 * fib: (n, -, -).
 */
export function family(name: string, p1: number, p2: number, p3: number): string;

/**
 * The u-table of the Fibonacci instance at index n: an a_n x a_{n+1} grid
 * whose (i1, i2) entry is the exponent weight u(alpha(i1, i2)).
 */
export function fib_table(n: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly analyze: (a: number, b: number) => [number, number];
    readonly family: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly fib_table: (a: number) => [number, number];
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
