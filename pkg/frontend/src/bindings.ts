/**
 * Bindings to the lvc compression CLI.
 *
 * Arrays cross the boundary as NPY files written to a temp directory; the
 * numerical work happens in the one core implementation behind the CLI, so
 * binding results are byte-identical to direct CLI runs. Float32Array
 * inputs are serialized without conversion; anything else is converted
 * once with a warning.
 */

import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { readNpy, writeNpy } from "./npy.js";

export const VERSION = "0.1.0";

export type CompressionMode = "query-attn" | "query-attn-mh" | "avg-pool";

export interface BoundArray {
  data: Float32Array;
  shape: number[];
}

export interface CompressOptions {
  tokensPerFrame: number;
  pseudoFrames: number;
  heads?: number;
  mode?: CompressionMode;
}

export interface JobSummary {
  input_shape: number[];
  output_shape: number[];
  frames: number;
  pseudo_frames: number;
  window: number;
  mode: string;
  heads: number;
  [key: string]: unknown;
}

/** Typed error reconstructed from the CLI's "Name: message" diagnostics. */
export class LvcError extends Error {
  constructor(
    public readonly errorName: string,
    message: string,
    public readonly exitCode: number,
  ) {
    super(`${errorName}: ${message}`);
  }
}

function cliCommand(): [string, string[]] {
  const override = process.env.LVC_CLI;
  if (override) {
    const parts = override.split(" ");
    return [parts[0], parts.slice(1)];
  }
  return ["python3", ["-m", "lvc"]];
}

export function runCli(args: string[]): { stdout: string; stderr: string } {
  const [cmd, prefix] = cliCommand();
  const res = spawnSync(cmd, [...prefix, ...args], { encoding: "utf-8" });
  if (res.error) {
    throw res.error;
  }
  if (res.status !== 0) {
    const line = (res.stderr ?? "").trim().split("\n").pop() ?? "";
    const m = /^([A-Za-z]+):\s*(.*)$/.exec(line);
    if (m) {
      throw new LvcError(m[1], m[2], res.status ?? 1);
    }
    throw new Error(`lvc exited ${res.status}: ${line}`);
  }
  return { stdout: res.stdout, stderr: res.stderr };
}

export function coreVersion(): string {
  return runCli(["--version"]).stdout.trim();
}

function asFloat32(values: Float32Array | number[], what: string): Float32Array {
  if (values instanceof Float32Array) {
    return values; // zero-conversion path
  }
  console.warn(`lvc: converting ${what} to Float32Array (one copy)`);
  return Float32Array.from(values);
}

export interface CompressResult extends BoundArray {
  summary: JobSummary;
}

export function boundCompress(
  features: BoundArray | { data: Float32Array | number[]; shape: number[] },
  query: { data: Float32Array | number[]; shape: number[] } | null,
  opts: CompressOptions,
): CompressResult {
  const mode = opts.mode ?? "query-attn";
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "lvc-bind-"));
  try {
    const featuresPath = path.join(dir, "features.npy");
    const outPath = path.join(dir, "out.npy");
    fs.writeFileSync(
      featuresPath,
      writeNpy(features.shape, asFloat32(features.data, "features")),
    );
    const args = [
      "compress",
      "--features", featuresPath,
      "--tokens-per-frame", String(opts.tokensPerFrame),
      "--pseudo-frames", String(opts.pseudoFrames),
      "--heads", String(opts.heads ?? 1),
      "--mode", mode,
      "--out", outPath,
    ];
    if (query !== null) {
      const queryPath = path.join(dir, "query.npy");
      fs.writeFileSync(queryPath, writeNpy(query.shape, asFloat32(query.data, "query")));
      args.push("--query", queryPath);
    }
    const { stdout } = runCli(args);
    const summary = JSON.parse(stdout) as JobSummary;
    const result = readNpy(fs.readFileSync(outPath));
    return {
      data: result.data as Float32Array,
      shape: result.shape,
      summary,
    };
  } finally {
    fs.rmSync(dir, { recursive: true, force: true });
  }
}
