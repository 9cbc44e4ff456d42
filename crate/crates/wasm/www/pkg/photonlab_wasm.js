/* @ts-self-types="./photonlab_wasm.d.ts" */

/**
 * Densities on the unit box `[0, 1)` at one time, with leakage fractions.
 */
export class ConeFrame {
    static __wrap(ptr) {
        const obj = Object.create(ConeFrame.prototype);
        obj.__wbg_ptr = ptr;
        ConeFrameFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        ConeFrameFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_coneframe_free(ptr, 0);
    }
    /**
     * Latest time before the light cone wraps around the box.
     * @returns {number}
     */
    get horizon() {
        const ret = wasm.coneframe_horizon(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get leakage_psi() {
        const ret = wasm.coneframe_leakage_psi(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get leakage_real() {
        const ret = wasm.coneframe_leakage_real(this.__wbg_ptr);
        return ret;
    }
    /**
     * Photon number density `|psi|^2`.
     * @returns {Float64Array}
     */
    get psi_density() {
        const ret = wasm.coneframe_psi_density(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * Electromagnetic energy density.
     * @returns {Float64Array}
     */
    get real_density() {
        const ret = wasm.coneframe_real_density(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get time() {
        const ret = wasm.coneframe_time(this.__wbg_ptr);
        return ret;
    }
}
if (Symbol.dispose) ConeFrame.prototype[Symbol.dispose] = ConeFrame.prototype.free;

/**
 * Photon-count distribution of a truncated coherent state.
 */
export class CountFrame {
    static __wrap(ptr) {
        const obj = Object.create(CountFrame.prototype);
        obj.__wbg_ptr = ptr;
        CountFrameFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        CountFrameFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_countframe_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get mean() {
        const ret = wasm.countframe_mean(this.__wbg_ptr);
        return ret;
    }
    /**
     * Probability lost to the truncation at `n_max`.
     * @returns {number}
     */
    get norm_deficit() {
        const ret = wasm.countframe_norm_deficit(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float64Array}
     */
    get probabilities() {
        const ret = wasm.countframe_probabilities(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) CountFrame.prototype[Symbol.dispose] = CountFrame.prototype.free;

/**
 * Both kernels over the whole 1D lattice at one time separation.
 */
export class KernelFrame {
    static __wrap(ptr) {
        const obj = Object.create(KernelFrame.prototype);
        obj.__wbg_ptr = ptr;
        KernelFrameFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        KernelFrameFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_kernelframe_free(ptr, 0);
    }
    /**
     * Causal A-D commutator kernel.
     * @returns {Float64Array}
     */
    get commutator() {
        const ret = wasm.kernelframe_commutator(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * Magnitude of the positive-frequency photon kernel.
     * @returns {Float64Array}
     */
    get photon_abs() {
        const ret = wasm.kernelframe_photon_abs(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get time() {
        const ret = wasm.kernelframe_time(this.__wbg_ptr);
        return ret;
    }
}
if (Symbol.dispose) KernelFrame.prototype[Symbol.dispose] = KernelFrame.prototype.free;

/**
 * Kernels at `cells` cell-crossing times (fractional values show the
 * off-lattice tails of the commutator).
 * @param {number} n
 * @param {number} cells
 * @returns {KernelFrame}
 */
export function kernel_profiles(n, cells) {
    const ret = wasm.kernel_profiles(n, cells);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return KernelFrame.__wrap(ret[0]);
}

/**
 * Start from a smooth bump of `A` at rest on `n` points and advance it by
 * `cells` cell-crossing times.
 * @param {number} n
 * @param {number} half_width
 * @param {number} cells
 * @returns {ConeFrame}
 */
export function light_cone_frame(n, half_width, cells) {
    const ret = wasm.light_cone_frame(n, half_width, cells);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return ConeFrame.__wrap(ret[0]);
}

/**
 * @param {number} alpha_re
 * @param {number} alpha_im
 * @param {number} n_max
 * @returns {CountFrame}
 */
export function photon_counts(alpha_re, alpha_im, n_max) {
    const ret = wasm.photon_counts(alpha_re, alpha_im, n_max);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return CountFrame.__wrap(ret[0]);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_30c8987f7c2ed4e2: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./photonlab_wasm_bg.js": import0,
    };
}

const ConeFrameFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_coneframe_free(ptr, 1));
const CountFrameFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_countframe_free(ptr, 1));
const KernelFrameFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_kernelframe_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('photonlab_wasm_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
