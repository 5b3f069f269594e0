/* tslint:disable */
/* eslint-disable */

/**
 * A model trained in the page.
 */
export class Model {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * The word `d` with `a : b :: c : d`, or an empty string if there is none.
     */
    analogy(a: string, b: string, c: string): string;
    codes(): string;
    /**
     * JSON array of `{word, cosine}`.
     */
    nearest(word: string, k: number): string;
    /**
     * Train on `text` (one sentence per line, lowercased).
     */
    constructor(text: string, cbow: boolean, dim: number, window: number, epochs: number, min_count: number, seed: number);
    positions(): bigint;
    /**
     * `[x0, y0, x1, y1, ...]`: the unit vectors projected on their first
     * two principal components.
     */
    projection(): Float32Array;
    /**
     * Vocabulary in frequency order, as a JSON array of strings.
     */
    words(): string;
}

/**
 * Huffman codes for the words of `text` seen at least `min_count` times,
 * as JSON `{words: [{word, count, code, path}], mean_length, inner_nodes}`.
 */
export function huffman_codes(text: string, min_count: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_model_free: (a: number, b: number) => void;
    readonly huffman_codes: (a: number, b: number, c: number) => [number, number, number, number];
    readonly model_analogy: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly model_codes: (a: number) => [number, number, number, number];
    readonly model_nearest: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly model_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly model_positions: (a: number) => bigint;
    readonly model_projection: (a: number) => [number, number];
    readonly model_words: (a: number) => [number, number];
    readonly __externref_table_alloc: () => number;
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
