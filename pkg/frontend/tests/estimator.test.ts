import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { parseArff, RuleEstimator } from "../src/index.js";
import type { Cell } from "../src/index.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const DATA = resolve(HERE, "..", "..", "data");

function cli(args: string[]): string {
  return execFileSync("python3", ["-m", "seqrules.cli", ...args], {
    encoding: "utf-8",
  });
}

function loadCar(file: string): { X: Cell[][]; y: Cell[] } {
  const table = parseArff(readFileSync(join(DATA, file), "utf-8"));
  return {
    X: table.rows.map((r) => r.slice(0, -1)),
    y: table.rows.map((r) => r.at(-1)!),
  };
}

const carAttributes = parseArff(
  readFileSync(join(DATA, "car_train.arff"), "utf-8"),
).attributes;

const carParams = {
  minsupp_new: 1,
  induction_measure: "C2",
  pruning_measure: "C2",
  voting_measure: "Correlation",
};

function carParamFlags(): string[] {
  return [
    "--minsupp-new", "1",
    "--measure-induction", "C2",
    "--measure-pruning", "C2",
    "--measure-voting", "Correlation",
  ];
}

describe("CLI equivalence on the car pair", () => {
  it("produces predictions, model, and rule list byte-identical to the CLI", () => {
    const train = loadCar("car_train.arff");
    const test = loadCar("car_test.arff");
    const estimator = new RuleEstimator({
      attributes: carAttributes.slice(0, -1),
      label: carAttributes.at(-1)!,
      params: carParams,
    });
    estimator.fit(train.X, train.y);
    const wrapperPreds = estimator.predict(test.X);

    const dir = mkdtempSync(join(tmpdir(), "seqrules-direct-"));
    const model = join(dir, "model.json");
    const report = join(dir, "predictions.txt");
    cli([
      "train", "--data", join(DATA, "car_train.arff"), "--label", "class",
      ...carParamFlags(), "--model-out", model,
    ]);
    cli([
      "predict", "--data", join(DATA, "car_test.arff"),
      "--model-in", model, "--report", report,
    ]);

    const directPreds = readFileSync(report, "utf-8").trimEnd().split("\n");
    expect(wrapperPreds).toEqual(directPreds);
    expect(estimator.modelBytes().equals(readFileSync(model))).toBe(true);
  }, 120_000);

  it("renders the same rule listing as the experiment runner", () => {
    const train = loadCar("car_train.arff");
    const estimator = new RuleEstimator({
      attributes: carAttributes.slice(0, -1),
      label: carAttributes.at(-1)!,
      params: carParams,
    });
    estimator.fit(train.X, train.y);
    const wrapperReport = estimator.rulesReport();

    const dir = mkdtempSync(join(tmpdir(), "seqrules-exp-"));
    const config = {
      version: 1,
      report_directory: join(dir, "reports"),
      datasets: [
        { name: "car", path: join(DATA, "car_train.arff"), label: "class" },
      ],
      parameter_sets: [{ name: "direct", params: carParams }],
      evaluation: { type: "train_test" },
    };
    const configPath = join(dir, "experiment.json");
    writeFileSync(configPath, JSON.stringify(config, null, 2) + "\n");
    cli(["experiment", configPath]);
    const directReport = readFileSync(
      join(dir, "reports", "car__direct_rules.txt"), "utf-8");
    expect(wrapperReport).toBe(directReport);
  }, 120_000);
});

describe("defaults", () => {
  it("estimator defaults equal the core-exported defaults", () => {
    const estimator = new RuleEstimator({
      attributes: [{ name: "v", kind: "numeric" }],
      label: { name: "y", kind: "numeric" },
    });
    const core = JSON.parse(cli(["defaults"]));
    expect(estimator.coreDefaults()).toEqual(core);
    expect(estimator.params()).toEqual(core);
  });

  it("overrides are layered on top of core defaults", () => {
    const estimator = new RuleEstimator({
      attributes: [{ name: "v", kind: "numeric" }],
      label: { name: "y", kind: "numeric" },
      params: { minsupp_new: 2 },
    });
    const params = estimator.params();
    expect(params.minsupp_new).toBe(2);
    expect(params.induction_measure).toBe(
      JSON.parse(cli(["defaults"])).induction_measure);
  });
});

describe("regression path", () => {
  it("returns numeric predictions for a numeric label", () => {
    const X: Cell[][] = [];
    const y: Cell[] = [];
    for (let i = 0; i < 40; i++) {
      const v = i / 4;
      X.push([v]);
      y.push(v < 5 ? 2.0 + 0.01 * i : 9.0 - 0.01 * i);
    }
    const estimator = new RuleEstimator({
      attributes: [{ name: "v", kind: "numeric" }],
      label: { name: "y", kind: "numeric" },
      params: { minsupp_new: 3 },
    });
    estimator.fit(X, y);
    const preds = estimator.predict([[1.0], [8.0]]) as number[];
    expect(preds).toHaveLength(2);
    for (const p of preds) expect(Number.isFinite(p)).toBe(true);
    expect(preds[0]!).toBeLessThan(preds[1]!);
  }, 60_000);
});

describe("validation", () => {
  const options = {
    attributes: [{ name: "v", kind: "numeric" as const }],
    label: { name: "y", kind: "numeric" as const },
  };

  it("rejects mismatched X/y lengths", () => {
    expect(() => new RuleEstimator(options).fit([[1]], [1, 2]))
      .toThrow(/rows/);
  });

  it("rejects predict before fit", () => {
    expect(() => new RuleEstimator(options).predict([[1]]))
      .toThrow(/before fit/);
  });

  it("rejects rows of the wrong width", () => {
    expect(() => new RuleEstimator(options).fit([[1, 2]], [1]))
      .toThrow(/cells/);
  });

  it("rejects a nominal label without a domain", () => {
    expect(() => new RuleEstimator({
      attributes: options.attributes,
      label: { name: "cls", kind: "nominal" },
    })).toThrow(/domain/);
  });
});
