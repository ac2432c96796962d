export { RuleEstimator } from "./estimator.js";
export type { EstimatorOptions, Params } from "./estimator.js";
export { formatArff, parseArff } from "./arff.js";
export type { AttributeSpec, Cell, Table } from "./arff.js";
