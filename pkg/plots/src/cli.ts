#!/usr/bin/env node
/** Command line front end for rendering sweep result figures. */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { render, PlotSpec } from "./render.js";
import { SchemaError, EmptySelection } from "./schema.js";

const STATS = ["median", "mean", "p90"] as const;

async function main(): Promise<number> {
  const argv = await yargs(hideBin(process.argv))
    .scriptName("plots")
    .command("render <csv>", "render a figure from a sweep result CSV", (y) =>
      y
        .positional("csv", { type: "string", demandOption: true, describe: "sweep result CSV" })
        .option("kind", { choices: ["heatmap", "line"] as const, demandOption: true })
        .option("x", { type: "string", demandOption: true, describe: "x axis column" })
        .option("y", { type: "string", describe: "y axis column (heatmap only)" })
        .option("series", { type: "string", describe: "split a line plot into one curve per value" })
        .option("stat", { choices: STATS, default: "median" as const, describe: "per-point statistic of md" })
        .option("logx", { type: "boolean", default: false })
        .option("logy", { type: "boolean", default: false })
        .option("logz", { type: "boolean", default: false, describe: "log color scale (heatmap)" })
        .option("out", { type: "string", demandOption: true, describe: "output figure path" }),
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      if (err) throw err;
      process.stderr.write(`error: ${msg}\n`);
      process.exit(1);
    })
    .parse();

  const spec: PlotSpec = {
    kind: argv.kind as PlotSpec["kind"],
    x: argv.x as string,
    y: argv.y as string | undefined,
    series: argv.series as string | undefined,
    stat: argv.stat as PlotSpec["stat"],
    logx: argv.logx as boolean,
    logy: argv.logy as boolean,
    logz: argv.logz as boolean,
    out: argv.out as string,
  };

  const result = render(argv.csv as string, spec);
  process.stderr.write(
    `wrote ${result.svgPath} and ${result.sidecarPath} (${result.aggregates.length} grid points)\n`,
  );
  return 0;
}

main()
  .then((code) => process.exit(code))
  .catch((err) => {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
      process.exit(3);
    }
    if (err instanceof EmptySelection) {
      process.stderr.write(`empty selection: ${err.message}\n`);
      process.exit(4);
    }
    if (err && typeof err === "object" && "code" in err) {
      process.stderr.write(`io error: ${(err as NodeJS.ErrnoException).message}\n`);
      process.exit(5);
    }
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    process.exit(1);
  });
