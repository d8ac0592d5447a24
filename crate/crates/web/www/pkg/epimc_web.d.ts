/* tslint:disable */
/* eslint-disable */

/**
 * A game of phantom tic-tac-toe against EPIMC. The human plays first.
 */
export class PhantomMatch {
    free(): void;
    [Symbol.dispose](): void;
    constructor(seed: number, depth: number, iterations: number);
    /**
     * Probes or places at `cell` (0..9, row-major) and lets the opponent
     * answer.
     */
    play(cell: number): string;
    view(): string;
}

/**
 * Fusion counts of the EPIMC policy, `game` being `rps`, `card_toy` or
 * `card_three_tricks`, `depths` a comma list.
 */
export function fusion_counts(game: string, depths: string): string;

/**
 * PIMC and EPIMC decisions at the root of the Leave-or-Play game.
 */
export function leave_or_play_decisions(leave_payoff: number, depth: number, iterations: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_phantommatch_free: (a: number, b: number) => void;
    readonly fusion_counts: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly leave_or_play_decisions: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly phantommatch_new: (a: number, b: number, c: number) => number;
    readonly phantommatch_play: (a: number, b: number) => [number, number, number, number];
    readonly phantommatch_view: (a: number) => [number, number];
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
