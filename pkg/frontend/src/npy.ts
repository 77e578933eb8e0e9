/**
 * NPY v1.0 read/write, matching the core package's writer byte-for-byte:
 * little-endian f4/f8, C order, 1-3 axes, header space-padded so the
 * payload starts at a 64-byte boundary.
 */

const MAGIC = Buffer.from([0x93, 0x4e, 0x55, 0x4d, 0x50, 0x59]); // \x93NUMPY

export interface NpyArray {
  dtype: "<f4" | "<f8";
  shape: number[];
  /** Flat values in row-major order. */
  data: Float32Array | Float64Array;
}

export function writeNpy(shape: number[], data: Float32Array | Float64Array): Buffer {
  if (shape.length < 1 || shape.length > 3) {
    throw new Error(`need 1-3 axes, got shape [${shape}]`);
  }
  const count = shape.reduce((a, b) => a * b, 1);
  if (count !== data.length) {
    throw new Error(`shape [${shape}] does not match ${data.length} values`);
  }
  const descr = data instanceof Float32Array ? "<f4" : "<f8";
  // python tuple repr: "(5,)" / "(2, 3)"
  const shapeRepr =
    shape.length === 1 ? `(${shape[0]},)` : `(${shape.join(", ")})`;
  let header = `{'descr': '${descr}', 'fortran_order': False, 'shape': ${shapeRepr}, }`;
  const pad = (64 - ((MAGIC.length + 4 + header.length + 1) % 64)) % 64;
  header += " ".repeat(pad) + "\n";

  const head = Buffer.alloc(MAGIC.length + 4 + header.length);
  MAGIC.copy(head, 0);
  head[6] = 1;
  head[7] = 0;
  head.writeUInt16LE(header.length, 8);
  head.write(header, 10, "ascii");
  // typed-array views are little-endian on every platform node supports
  const payload = Buffer.from(data.buffer, data.byteOffset, data.byteLength);
  return Buffer.concat([head, payload]);
}

export function readNpy(raw: Buffer): NpyArray {
  if (!raw.subarray(0, 6).equals(MAGIC)) {
    throw new Error("not an NPY file");
  }
  if (raw[6] !== 1 || raw[7] !== 0) {
    throw new Error(`NPY version ${raw[6]}.${raw[7]} unsupported`);
  }
  const hlen = raw.readUInt16LE(8);
  const header = raw.subarray(10, 10 + hlen).toString("ascii");
  const descr = /'descr':\s*'([^']+)'/.exec(header)?.[1];
  const fortran = /'fortran_order':\s*(True|False)/.exec(header)?.[1];
  const shapeText = /'shape':\s*\(([^)]*)\)/.exec(header)?.[1];
  if (descr === undefined || fortran === undefined || shapeText === undefined) {
    throw new Error("malformed NPY header");
  }
  if (fortran === "True") {
    throw new Error("fortran_order arrays unsupported");
  }
  if (descr !== "<f4" && descr !== "<f8") {
    throw new Error(`dtype ${descr} unsupported`);
  }
  const shape = shapeText
    .split(",")
    .map((s) => s.trim())
    .filter((s) => s.length > 0)
    .map(Number);
  const count = shape.reduce((a, b) => a * b, 1);
  const itemSize = descr === "<f4" ? 4 : 8;
  const payload = raw.subarray(10 + hlen);
  if (payload.length < count * itemSize) {
    throw new Error(`truncated payload: ${payload.length} bytes for ${count} values`);
  }
  const bytes = new Uint8Array(count * itemSize);
  bytes.set(payload.subarray(0, count * itemSize));
  const data =
    descr === "<f4" ? new Float32Array(bytes.buffer) : new Float64Array(bytes.buffer);
  return { dtype: descr, shape, data };
}
