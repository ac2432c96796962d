// Estimator-style wrapper around the rule-induction CLI.
//
// Every numeric result is produced by the core process: fitting shells out
// to `train`, prediction to `predict`, rule listings to `experiment`, and
// parameter defaults to `defaults`.  This module only moves data across the
// boundary as ARFF files and report files.

import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { AttributeSpec, Cell, formatArff } from "./arff.js";

export type Params = Record<string, unknown>;

export interface EstimatorOptions {
  /** Column specs for the feature matrix, in column order. */
  attributes: AttributeSpec[];
  /** Spec for the label column. */
  label: AttributeSpec;
  /** Induction parameter overrides; defaults come from the core. */
  params?: Params;
  /** Python interpreter used to run the core (default "python3"). */
  python?: string;
}

const PARAM_FLAGS: Record<string, string> = {
  minsupp_new: "--minsupp-new",
  max_uncovered_fraction: "--max-uncovered",
  induction_measure: "--measure-induction",
  pruning_measure: "--measure-pruning",
  voting_measure: "--measure-voting",
  significance_level: "--significance-level",
  seed: "--seed",
};

export class RuleEstimator {
  readonly options: EstimatorOptions;
  private readonly python: string;
  private workDir: string | null = null;
  private trainPath: string | null = null;
  private modelFile: string | null = null;

  constructor(options: EstimatorOptions) {
    if (options.label.kind === "nominal" && !options.label.domain?.length) {
      throw new Error("nominal label needs a closed domain");
    }
    this.options = options;
    this.python = options.python ?? "python3";
  }

  /** Effective induction parameters: core defaults plus overrides. */
  params(): Params {
    return { ...this.coreDefaults(), ...(this.options.params ?? {}) };
  }

  /** Default induction parameters as exported by the core. */
  coreDefaults(): Params {
    return JSON.parse(this.run(["defaults"])) as Params;
  }

  fit(X: Cell[][], y: Cell[]): this {
    if (X.length !== y.length) {
      throw new Error(`X has ${X.length} rows but y has ${y.length}`);
    }
    if (X.length === 0) throw new Error("cannot fit on an empty dataset");
    this.workDir = mkdtempSync(join(tmpdir(), "seqrules-"));
    this.trainPath = join(this.workDir, "train.arff");
    writeFileSync(this.trainPath, this.toArff(X, y));
    this.modelFile = join(this.workDir, "model.json");
    this.run([
      "train",
      "--data", this.trainPath,
      "--label", this.options.label.name,
      ...this.paramFlags(),
      "--model-out", this.modelFile,
    ]);
    return this;
  }

  predict(X: Cell[][]): Cell[] {
    if (!this.modelFile || !this.workDir) {
      throw new Error("predict called before fit");
    }
    const dataPath = join(this.workDir, "predict.arff");
    // the core checks schema identity, so emit the label column with a
    // placeholder value; predictions never read it
    const dummy: Cell =
      this.options.label.kind === "nominal" ? this.options.label.domain![0]! : 0;
    writeFileSync(dataPath, this.toArff(X, X.map(() => dummy)));
    const report = join(this.workDir, "predictions.txt");
    this.run([
      "predict",
      "--data", dataPath,
      "--model-in", this.modelFile,
      "--report", report,
    ]);
    const lines = readFileSync(report, "utf-8").trimEnd().split("\n");
    if (this.options.label.kind === "numeric") return lines.map(Number);
    return lines;
  }

  /** Saved model document (rules, covering stats, parameters). */
  model(): unknown {
    if (!this.modelFile) throw new Error("model requested before fit");
    return JSON.parse(readFileSync(this.modelFile, "utf-8"));
  }

  modelBytes(): Buffer {
    if (!this.modelFile) throw new Error("model requested before fit");
    return readFileSync(this.modelFile);
  }

  /** Human-readable rule listing, rendered by the core's report writer. */
  rulesReport(): string {
    if (!this.trainPath || !this.workDir) {
      throw new Error("rules requested before fit");
    }
    const reportDir = join(this.workDir, "reports");
    const config = {
      version: 1,
      report_directory: reportDir,
      datasets: [
        {
          name: "fit",
          path: this.trainPath,
          label: this.options.label.name,
        },
      ],
      parameter_sets: [{ name: "model", params: this.options.params ?? {} }],
      evaluation: { type: "train_test" },
    };
    const configPath = join(this.workDir, "experiment.json");
    writeFileSync(configPath, JSON.stringify(config, null, 2) + "\n");
    this.run(["experiment", configPath]);
    return readFileSync(join(reportDir, "fit__model_rules.txt"), "utf-8");
  }

  private toArff(X: Cell[][], y: Cell[]): string {
    const width = this.options.attributes.length;
    X.forEach((row, i) => {
      if (row.length !== width) {
        throw new Error(`row ${i} has ${row.length} cells, expected ${width}`);
      }
    });
    return formatArff({
      relation: "seqrules",
      attributes: [...this.options.attributes, this.options.label],
      rows: X.map((row, i) => [...row, y[i]!] as Cell[]),
    });
  }

  private paramFlags(): string[] {
    const flags: string[] = [];
    for (const [key, value] of Object.entries(this.options.params ?? {})) {
      if (key === "pruning_enabled") {
        if (value === false) flags.push("--no-pruning");
        continue;
      }
      if (key === "significance_filter") {
        if (value === true) flags.push("--filter-significant");
        continue;
      }
      const flag = PARAM_FLAGS[key];
      if (!flag) throw new Error(`unknown induction parameter ${key}`);
      flags.push(flag, String(value));
    }
    return flags;
  }

  private run(args: string[]): string {
    return execFileSync(this.python, ["-m", "seqrules.cli", ...args], {
      encoding: "utf-8",
    });
  }
}
