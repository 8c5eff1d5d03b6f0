from pathlib import Path

from metronoids.exporters.csv_writer import write_csv
from metronoids.models.contracts import RunConfig
from metronoids.pipelines.job_runner import ExperimentRunner
from metronoids.pipelines.tables import SUITES, build_table

OUTPUT_ROOT = Path("output") / "tables"
SEED = 20240601

if __name__ == "__main__":
    runner = ExperimentRunner(output_root=OUTPUT_ROOT)

    for suite in SUITES:
        config = RunConfig(command="tables", seed=SEED, parameters={"suite": suite})
        header, rows = build_table(suite, SEED)
        target = OUTPUT_ROOT / f"{suite}.csv"
        runner.run(config, lambda meta: [write_csv(target, header, rows, meta)])
        print(f"OK: {suite} -> {target}")
