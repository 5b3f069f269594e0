/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_model_free: (a: number, b: number) => void;
export const huffman_codes: (a: number, b: number, c: number) => [number, number, number, number];
export const model_analogy: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const model_codes: (a: number) => [number, number, number, number];
export const model_nearest: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const model_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const model_positions: (a: number) => bigint;
export const model_projection: (a: number) => [number, number];
export const model_words: (a: number) => [number, number];
export const __externref_table_alloc: () => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
