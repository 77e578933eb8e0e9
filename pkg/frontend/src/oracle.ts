/**
 * Independent loop-based reference for the compression math, used to check
 * binding outputs without round-tripping through the core implementation.
 */

export function meanPoolQuery(query: Float32Array, rows: number, dim: number): Float64Array {
  const out = new Float64Array(dim);
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < dim; j++) {
      out[j] += query[i * dim + j];
    }
  }
  for (let j = 0; j < dim; j++) {
    out[j] /= rows;
  }
  return out;
}

export function oracleCompress(
  features: Float32Array,
  rows: number,
  dim: number,
  query: Float32Array,
  queryRows: number,
  window: number,
  heads = 1,
): Float64Array {
  if (rows % window !== 0) {
    throw new Error(`window ${window} does not tile ${rows} rows`);
  }
  if (dim % heads !== 0) {
    throw new Error(`${heads} heads do not divide dim ${dim}`);
  }
  const headDim = dim / heads;
  const qBar = meanPoolQuery(query, queryRows, dim);
  const numWindows = rows / window;
  const out = new Float64Array(numWindows * dim);
  for (let i = 0; i < numWindows; i++) {
    for (let h = 0; h < heads; h++) {
      const lo = h * headDim;
      const logits = new Float64Array(window);
      for (let k = 0; k < window; k++) {
        let s = 0;
        for (let j = lo; j < lo + headDim; j++) {
          s += qBar[j] * features[(i * window + k) * dim + j];
        }
        logits[k] = s / Math.sqrt(headDim);
      }
      let top = -Infinity;
      for (const x of logits) top = Math.max(top, x);
      let z = 0;
      const exps = new Float64Array(window);
      for (let k = 0; k < window; k++) {
        exps[k] = Math.exp(logits[k] - top);
        z += exps[k];
      }
      for (let k = 0; k < window; k++) {
        const weight = exps[k] / z;
        for (let j = lo; j < lo + headDim; j++) {
          out[i * dim + j] += weight * features[(i * window + k) * dim + j];
        }
      }
    }
  }
  return out;
}

export function oracleAvgPool(
  features: Float32Array,
  rows: number,
  dim: number,
  window: number,
): Float64Array {
  const numWindows = rows / window;
  const out = new Float64Array(numWindows * dim);
  for (let i = 0; i < numWindows; i++) {
    for (let k = 0; k < window; k++) {
      for (let j = 0; j < dim; j++) {
        out[i * dim + j] += features[(i * window + k) * dim + j];
      }
    }
    for (let j = 0; j < dim; j++) {
      out[i * dim + j] /= window;
    }
  }
  return out;
}
