/* tslint:disable */
/* eslint-disable */

/**
 * Densities on the unit box `[0, 1)` at one time, with leakage fractions.
 */
export class ConeFrame {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Latest time before the light cone wraps around the box.
     */
    readonly horizon: number;
    readonly leakage_psi: number;
    readonly leakage_real: number;
    /**
     * Photon number density `|psi|^2`.
     */
    readonly psi_density: Float64Array;
    /**
     * Electromagnetic energy density.
     */
    readonly real_density: Float64Array;
    readonly time: number;
}

/**
 * Photon-count distribution of a truncated coherent state.
 */
export class CountFrame {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly mean: number;
    /**
     * Probability lost to the truncation at `n_max`.
     */
    readonly norm_deficit: number;
    readonly probabilities: Float64Array;
}

/**
 * Both kernels over the whole 1D lattice at one time separation.
 */
export class KernelFrame {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Causal A-D commutator kernel.
     */
    readonly commutator: Float64Array;
    /**
     * Magnitude of the positive-frequency photon kernel.
     */
    readonly photon_abs: Float64Array;
    readonly time: number;
}

/**
 * Kernels at `cells` cell-crossing times (fractional values show the
 * off-lattice tails of the commutator).
 */
export function kernel_profiles(n: number, cells: number): KernelFrame;

/**
 * Start from a smooth bump of `A` at rest on `n` points and advance it by
 * `cells` cell-crossing times.
 */
export function light_cone_frame(n: number, half_width: number, cells: number): ConeFrame;

export function photon_counts(alpha_re: number, alpha_im: number, n_max: number): CountFrame;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_coneframe_free: (a: number, b: number) => void;
    readonly __wbg_countframe_free: (a: number, b: number) => void;
    readonly __wbg_kernelframe_free: (a: number, b: number) => void;
    readonly coneframe_horizon: (a: number) => number;
    readonly coneframe_leakage_psi: (a: number) => number;
    readonly coneframe_leakage_real: (a: number) => number;
    readonly coneframe_psi_density: (a: number) => [number, number];
    readonly coneframe_real_density: (a: number) => [number, number];
    readonly coneframe_time: (a: number) => number;
    readonly countframe_mean: (a: number) => number;
    readonly countframe_norm_deficit: (a: number) => number;
    readonly countframe_probabilities: (a: number) => [number, number];
    readonly kernel_profiles: (a: number, b: number) => [number, number, number];
    readonly kernelframe_commutator: (a: number) => [number, number];
    readonly kernelframe_photon_abs: (a: number) => [number, number];
    readonly kernelframe_time: (a: number) => number;
    readonly light_cone_frame: (a: number, b: number, c: number) => [number, number, number];
    readonly photon_counts: (a: number, b: number, c: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
