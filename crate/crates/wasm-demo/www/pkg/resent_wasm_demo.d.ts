/* tslint:disable */
/* eslint-disable */

export class AverageView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * 5th, 50th and 95th percentiles of `1 - eta * MLP`.
     */
    readonly bracket: Float64Array;
    readonly mean_autocorr: Float64Array;
    readonly mean_corr_power: Float64Array;
    readonly mean_signature: Float64Array;
}

export class FitView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Circular autocorrelation of the entropy-loss residuals.
     */
    readonly autocorr: Float64Array;
    readonly converged: boolean;
    /**
     * Normalized power spectrum of the entropy-loss residuals.
     */
    readonly corr_power: Float64Array;
    readonly fit_curve: Float64Array;
    /**
     * `[mse, mlp, total]` at the entropy-loss optimum.
     */
    readonly fit_loss: Float64Array;
    readonly ols_curve: Float64Array;
    /**
     * `[mse, mlp, total]` at the least-squares solution.
     */
    readonly ols_loss: Float64Array;
    readonly x: Float64Array;
    readonly y: Float64Array;
}

export class LandscapeView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly mse: Float64Array;
    readonly total: Float64Array;
    readonly value: Float64Array;
}

/**
 * Residual curves averaged over white-noise realizations for one order.
 * `family_name` may be `none` for unfitted noise.
 */
export function averaged_curves(family_name: string, order: number, n: number, realizations: number, seed: bigint): AverageView;

/**
 * Fits a noisy demo signal by least squares and by the entropy loss, and
 * returns both curves with the residual spectrum of the latter.
 */
export function fit_and_spectrum(family_name: string, order: number, eta: number, n: number, noise_sd: number, seed: bigint): FitView;

/**
 * MSE and entropy loss along coefficient `axis`, within `span` of its
 * least-squares value, for the same noisy sample as `fit_and_spectrum`.
 */
export function landscape(family_name: string, order: number, eta: number, axis: number, span: number, steps: number, n: number, noise_sd: number, seed: bigint): LandscapeView;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_averageview_free: (a: number, b: number) => void;
    readonly __wbg_fitview_free: (a: number, b: number) => void;
    readonly __wbg_landscapeview_free: (a: number, b: number) => void;
    readonly averaged_curves: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number];
    readonly averageview_bracket: (a: number) => [number, number];
    readonly averageview_mean_autocorr: (a: number) => [number, number];
    readonly averageview_mean_corr_power: (a: number) => [number, number];
    readonly averageview_mean_signature: (a: number) => [number, number];
    readonly fit_and_spectrum: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint) => [number, number, number];
    readonly fitview_autocorr: (a: number) => [number, number];
    readonly fitview_converged: (a: number) => number;
    readonly fitview_corr_power: (a: number) => [number, number];
    readonly fitview_fit_curve: (a: number) => [number, number];
    readonly fitview_fit_loss: (a: number) => [number, number];
    readonly fitview_ols_curve: (a: number) => [number, number];
    readonly fitview_ols_loss: (a: number) => [number, number];
    readonly fitview_x: (a: number) => [number, number];
    readonly fitview_y: (a: number) => [number, number];
    readonly landscape: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: bigint) => [number, number, number];
    readonly landscapeview_mse: (a: number) => [number, number];
    readonly landscapeview_total: (a: number) => [number, number];
    readonly landscapeview_value: (a: number) => [number, number];
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
