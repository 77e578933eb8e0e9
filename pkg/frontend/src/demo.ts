/**
 * Toy drop-in demonstration: random "encoder" features for 64 frames with a
 * planted query-aligned row per window stand in for a vision encoder.
 * Compresses to 16 pseudo frames and compares query attention against
 * average pooling by cosine similarity to the planted target.
 *
 * Run: npm run demo [-- seed]
 */

import { boundCompress } from "./bindings.js";

/** mulberry32: tiny deterministic PRNG, good enough for demo data. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function gaussian(rand: () => number): number {
  // Box-Muller, one value per call
  let u = 0;
  while (u === 0) u = rand();
  return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * rand());
}

function normalize(v: Float32Array): void {
  let n = 0;
  for (const x of v) n += x * x;
  n = Math.sqrt(n);
  for (let i = 0; i < v.length; i++) v[i] = Math.fround(v[i] / n);
}

function cosine(a: Float32Array | number[], b: Float32Array, off: number, dim: number): number {
  let dot = 0;
  let na = 0;
  let nb = 0;
  for (let j = 0; j < dim; j++) {
    const x = a instanceof Float32Array ? a[j] : a[j];
    const y = b[off + j];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  return dot / (Math.sqrt(na) * Math.sqrt(nb));
}

export interface DemoResult {
  inputShape: number[];
  outputShape: number[];
  meanCosineAttention: number;
  meanCosineAverage: number;
}

export function demoPipeline(seed: number, log: (line: string) => void = console.log): DemoResult {
  const frames = 64;
  const tokensPerFrame = 4;
  const dim = 64;
  const pseudoFrames = 16;
  const window = frames / pseudoFrames;
  const rows = frames * tokensPerFrame;
  const numWindows = rows / window;

  const rand = mulberry32(seed);
  const target = new Float32Array(dim);
  for (let j = 0; j < dim; j++) target[j] = Math.fround(gaussian(rand));
  normalize(target);

  const features = new Float32Array(rows * dim);
  for (let i = 0; i < rows; i++) {
    const row = new Float32Array(dim);
    for (let j = 0; j < dim; j++) row[j] = Math.fround(gaussian(rand));
    normalize(row);
    features.set(row, i * dim);
  }
  for (let i = 0; i < numWindows; i++) {
    const planted = Math.floor(rand() * window);
    features.set(target, (i * window + planted) * dim);
  }

  const featureInput = { data: features, shape: [rows, dim] };
  const query = { data: target, shape: [1, dim] };
  const opts = { tokensPerFrame, pseudoFrames };
  const attn = boundCompress(featureInput, query, opts);
  const avg = boundCompress(featureInput, null, { ...opts, mode: "avg-pool" as const });

  let cosAttn = 0;
  let cosAvg = 0;
  for (let i = 0; i < numWindows; i++) {
    cosAttn += cosine(target, attn.data, i * dim, dim);
    cosAvg += cosine(target, avg.data, i * dim, dim);
  }
  cosAttn /= numWindows;
  cosAvg /= numWindows;

  log(`seed ${seed}`);
  log(`input shape (${rows}, ${dim}) -> output shape (${attn.shape.join(", ")})`);
  log(`mean cosine to target, query attention: ${cosAttn.toFixed(6)}`);
  log(`mean cosine to target, average pooling: ${cosAvg.toFixed(6)}`);
  return {
    inputShape: [rows, dim],
    outputShape: attn.shape,
    meanCosineAttention: cosAttn,
    meanCosineAverage: cosAvg,
  };
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("demo.js") || entry.endsWith("demo.ts")) {
  demoPipeline(Number(process.argv[2] ?? 0));
}
