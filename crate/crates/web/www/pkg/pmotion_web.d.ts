/* tslint:disable */
/* eslint-disable */

export function followOrbit(deck: string, mode: string): string;

export function replayDeck(deck: string, mode: string, verbose: boolean): string;

export function replaySeeded(seed: bigint, index: bigint, mode: string, verbose: boolean): string;

export function runExperiment(games: number, batches: number, seed: bigint, mode: string, moves_bin_width: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly followOrbit: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly replayDeck: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly replaySeeded: (a: bigint, b: bigint, c: number, d: number, e: number) => [number, number, number, number];
    readonly runExperiment: (a: number, b: number, c: bigint, d: number, e: number, f: number) => [number, number, number, number];
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
