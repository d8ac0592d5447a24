/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_phantommatch_free: (a: number, b: number) => void;
export const fusion_counts: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const leave_or_play_decisions: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const phantommatch_new: (a: number, b: number, c: number) => number;
export const phantommatch_play: (a: number, b: number) => [number, number, number, number];
export const phantommatch_view: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
