/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_coneframe_free: (a: number, b: number) => void;
export const __wbg_countframe_free: (a: number, b: number) => void;
export const __wbg_kernelframe_free: (a: number, b: number) => void;
export const coneframe_horizon: (a: number) => number;
export const coneframe_leakage_psi: (a: number) => number;
export const coneframe_leakage_real: (a: number) => number;
export const coneframe_psi_density: (a: number) => [number, number];
export const coneframe_real_density: (a: number) => [number, number];
export const coneframe_time: (a: number) => number;
export const countframe_mean: (a: number) => number;
export const countframe_norm_deficit: (a: number) => number;
export const countframe_probabilities: (a: number) => [number, number];
export const kernel_profiles: (a: number, b: number) => [number, number, number];
export const kernelframe_commutator: (a: number) => [number, number];
export const kernelframe_photon_abs: (a: number) => [number, number];
export const kernelframe_time: (a: number) => number;
export const light_cone_frame: (a: number, b: number, c: number) => [number, number, number];
export const photon_counts: (a: number, b: number, c: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
