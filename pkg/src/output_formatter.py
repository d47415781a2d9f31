import math


def _num(value, spec=".6f"):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    return format(value, spec)


def format_verdict_line(kind, crunodes_expected):
    return f"{kind}, {'crunodes expected' if crunodes_expected else 'no crunodes expected'}"


def format_classification(params, trajectory, detected=None):
    lines = [format_verdict_line(trajectory.kind.value, trajectory.crunodes_expected)]
    header = f"{'Param':<12} | {'Value':<14}"
    lines.append(header)
    lines.append("-" * len(header))
    rows = [
        ("h", str(params.h)),
        ("d = V_h", _num(params.d)),
        ("r = V/h", _num(params.r)),
        ("R = V-V/h", _num(params.R)),
        ("critical", str(params.n_critical)),
    ]
    if detected is not None:
        rows.append(("crossings", str(detected)))
    for name, value in rows:
        lines.append(f"{name:<12} | {value:<14}")
    if trajectory.critical_angles:
        angles = ", ".join(f"{math.degrees(a):.2f}" for a in trajectory.critical_angles)
        lines.append(f"critical angles (deg): {angles}")
    return "\n".join(lines)


def format_validity_summary(summary):
    lines = []
    if not summary.total:
        lines.append("No anchors evaluated.")
        return "\n".join(lines)
    header = (f"{'Anchors':<8} | {'Valid':<8} | {'Exceeded':<8} | {'Bridged':<8} | "
              f"{'No period':<9} | {'max|G_prime|':<12}")
    lines.append(header)
    lines.append("-" * len(header))
    lines.append(f"{summary.total:<8} | {summary.valid:<8} | {summary.exceeded:<8} | {summary.bridged:<8} | "
                 f"{summary.not_found:<9} | {_num(summary.max_abs_gamma_prime, '.3e'):<12}")
    if summary.invalid_intervals:
        lines.append("")
        lines.append("Invalid intervals (s):")
        for start, end in summary.invalid_intervals:
            lines.append(f"  [{start:.6f}, {end:.6f}]")
    return "\n".join(lines)


def format_estimates(records, limit=None):
    lines = []
    if not records:
        lines.append("No estimates produced.")
        return "\n".join(lines)
    shown = records if limit is None else records[:limit]
    header = (f"{'t (s)':<10} | {'f_inst':<10} | {'f_pll':<10} | {'f_qss':<10} | "
              f"{'T (s)':<10} | {'G_prime':<10} | {'Valid':<5}")
    lines.append(header)
    lines.append("-" * len(header))
    for r in shown:
        lines.append(f"{r.t:<10.5f} | {_num(r.f_inst, '.4f'):<10} | {_num(r.f_pll, '.4f'):<10} | "
                     f"{_num(r.f_qss, '.4f'):<10} | {_num(r.T, '.6f'):<10} | "
                     f"{_num(r.gamma_prime, '.2e'):<10} | {r.valid:<5}")
    if len(shown) < len(records):
        lines.append(f"... {len(records) - len(shown)} more")
    return "\n".join(lines)


def format_presets(names):
    lines = []
    if not names:
        lines.append("No presets defined.")
        return "\n".join(lines)
    width = max(3, len(str(len(names))))
    header = f"{'Pos':<{width}} | Preset"
    lines.append(header)
    lines.append("-" * len(header))
    for i, name in enumerate(names):
        lines.append(f"{str(i + 1):<{width}} | {name}")
    return "\n".join(lines)
