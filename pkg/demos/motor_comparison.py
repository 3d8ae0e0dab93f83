"""Torque-density comparison across the bundled motor records.

Loads the bundled catalog of published motor operating points, derives
the three volume/current-normalized metrics for each, and prints the
comparison table with the lead machine as the baseline.  Run as
`python3 demos/motor_comparison.py`.
"""

from srmec.metrics import comparison_table, derive_metrics, improvement_percent, load_motor_records


def main() -> None:
    records = load_motor_records()
    print(comparison_table(records))

    baseline = records[0]
    lead = derive_metrics(baseline)
    print(f"baseline: {baseline.name} at {baseline.current_a:g} A in "
          f"{baseline.volume_ml:g} mL -> {lead.torque_density_per_ampere:.3f} N*m/L/A")
    runner_up = max(
        (record for record in records[1:]),
        key=lambda record: derive_metrics(record).torque_density_per_ampere,
    )
    margin = improvement_percent(lead, derive_metrics(runner_up))
    print(f"closest competitor: {runner_up.name}, beaten by {margin:.1f}% on "
          "torque density per ampere.")


if __name__ == "__main__":
    main()
