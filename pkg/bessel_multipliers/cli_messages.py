"""A collection of messages shown by the command-line interface."""

from textwrap import dedent


violations_found = """
At least one certified violation was found. Rerun a failing draw on its own
with --replay <draw>, and add --verbose for the individual certificates.
"""

not_invertible = """
The multiplier is not invertible: its smallest singular value is at or below
the invertibility floor. No inverse was computed.
"""

vector_required = """
The apply action needs an input vector. Pass it with --vector, as
comma-separated complex numbers, for example: --vector "1,0.5+1j,-2".
"""


# --- Dynamic strings ---
# These need to be generated in functions, to include values determined as the
# command runs.


def unknown_suite(name, available):
    msg = dedent(
        f"""
        There's no check suite named {name}.
        Available suites: {", ".join(sorted(available))}
        """
    )
    return msg


def check_started(suite_name, indices, seed):
    if len(indices) == 1:
        return f"Running {suite_name}, draw {indices[0]} (seed {seed})..."
    return f"Running {suite_name} over {len(indices)} draws (seed {seed})..."


def draw_failed(suite_name, index, seed):
    return f"{suite_name}: draw {index} failed. Replay it with: check {suite_name} --seed {seed} --replay {index}"


def check_summary(report):
    """Summary of a finished sweep, one status per line."""
    counts = report.status_counts
    msg = dedent(
        f"""
        --- {report.suite}: {len(report.records)} draw(s) ---
          pass:           {counts["pass"]}
          fail:           {counts["fail"]}
          not applicable: {counts["not_applicable"]}
          no conclusion:  {counts["no_conclusion"]}
        """
    )
    if report.failing_draws:
        shown = ", ".join(str(i) for i in report.failing_draws[:10])
        msg += f"  failing draws: {shown}\n"
    return msg


def perturb_summary(report):
    failed = sum(not row.satisfied for row in report.rows)
    msg = dedent(
        f"""
        --- Perturbation of the {report.side.value} ---
          steps checked: {len(report.rows)}
          envelope violations: {failed}
        """
    )
    if not report.linearity_holds:
        msg += f"  linearity residual too large: {report.linearity_residual:.3e}\n"
    return msg


def classify_summary(seq_class, bounds):
    return f"{seq_class.kind.value}: frame bounds ({bounds.lower:.12g}, {bounds.upper:.12g})"
