export {
  BoundArray,
  CompressionMode,
  CompressOptions,
  CompressResult,
  JobSummary,
  LvcError,
  VERSION,
  boundCompress,
  coreVersion,
  runCli,
} from "./bindings.js";
export { demoPipeline, DemoResult } from "./demo.js";
export { NpyArray, readNpy, writeNpy } from "./npy.js";
export { meanPoolQuery, oracleAvgPool, oracleCompress } from "./oracle.js";
