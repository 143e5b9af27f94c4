/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_averageview_free: (a: number, b: number) => void;
export const __wbg_fitview_free: (a: number, b: number) => void;
export const __wbg_landscapeview_free: (a: number, b: number) => void;
export const averaged_curves: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number];
export const averageview_bracket: (a: number) => [number, number];
export const averageview_mean_autocorr: (a: number) => [number, number];
export const averageview_mean_corr_power: (a: number) => [number, number];
export const averageview_mean_signature: (a: number) => [number, number];
export const fit_and_spectrum: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint) => [number, number, number];
export const fitview_autocorr: (a: number) => [number, number];
export const fitview_converged: (a: number) => number;
export const fitview_corr_power: (a: number) => [number, number];
export const fitview_fit_curve: (a: number) => [number, number];
export const fitview_fit_loss: (a: number) => [number, number];
export const fitview_ols_curve: (a: number) => [number, number];
export const fitview_ols_loss: (a: number) => [number, number];
export const fitview_x: (a: number) => [number, number];
export const fitview_y: (a: number) => [number, number];
export const landscape: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: bigint) => [number, number, number];
export const landscapeview_mse: (a: number) => [number, number];
export const landscapeview_total: (a: number) => [number, number];
export const landscapeview_value: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
