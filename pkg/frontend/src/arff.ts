// Minimal ARFF reading/writing for exchanging tabular data with the core
// CLI.  Supports the subset the core emits: nominal domains in braces,
// numeric attributes, '?' for missing, '%' comments.

export interface AttributeSpec {
  name: string;
  kind: "nominal" | "numeric";
  /** Closed symbol domain; required for nominal attributes. */
  domain?: string[];
}

export type Cell = string | number | null;

export interface Table {
  relation: string;
  attributes: AttributeSpec[];
  rows: Cell[][];
}

export function parseArff(text: string): Table {
  let relation = "data";
  const attributes: AttributeSpec[] = [];
  const rows: Cell[][] = [];
  let inData = false;
  for (const raw of text.split(/\r?\n/)) {
    const line = raw.trim();
    if (line === "" || line.startsWith("%")) continue;
    const lower = line.toLowerCase();
    if (lower.startsWith("@relation")) {
      relation = line.slice("@relation".length).trim();
    } else if (lower.startsWith("@attribute")) {
      const rest = line.slice("@attribute".length).trim();
      const brace = rest.indexOf("{");
      if (brace >= 0) {
        const name = rest.slice(0, brace).trim();
        const domain = rest
          .slice(brace + 1, rest.lastIndexOf("}"))
          .split(",")
          .map((s) => s.trim());
        attributes.push({ name, kind: "nominal", domain });
      } else {
        const [name, kind] = rest.split(/\s+/);
        if (!/^(numeric|real|integer)$/i.test(kind)) {
          throw new Error(`unsupported attribute type ${kind!} for ${name!}`);
        }
        attributes.push({ name: name!, kind: "numeric" });
      }
    } else if (lower.startsWith("@data")) {
      inData = true;
    } else if (inData) {
      const cells = line.split(",").map((c, j) => {
        const v = c.trim();
        if (v === "?") return null;
        return attributes[j]!.kind === "numeric" ? Number(v) : v;
      });
      if (cells.length !== attributes.length) {
        throw new Error(`row has ${cells.length} cells, expected ${attributes.length}`);
      }
      rows.push(cells);
    }
  }
  return { relation, attributes, rows };
}

export function formatArff(table: Table): string {
  const lines: string[] = [`@relation ${table.relation}`, ""];
  for (const attr of table.attributes) {
    if (attr.kind === "nominal") {
      lines.push(`@attribute ${attr.name} {${(attr.domain ?? []).join(",")}}`);
    } else {
      lines.push(`@attribute ${attr.name} numeric`);
    }
  }
  lines.push("", "@data");
  for (const row of table.rows) {
    lines.push(row.map((c) => (c === null ? "?" : String(c))).join(","));
  }
  return lines.join("\n") + "\n";
}
