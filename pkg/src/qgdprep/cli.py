"""Command-line driver: run, compare, analyze, table1 and vqsp-train.

Settings come from an optional INI file whose keys are addressed as
``section.key`` (for example ``qgd.epsilon``); command-line flags win.
Exit codes: 0 success, 2 configuration error, 3 non-convergence (outputs are
still written).
"""
from __future__ import annotations

import argparse
import configparser
import csv
import math
import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import analysis, baselines, models, qgd, vqsp
from .pauli import HamiltonianFormatError, PauliHamiltonian, amplitude_vector, parse_hamiltonian
from .sim import PostSelectionError, StateVector

OUTPUT_ENV = "QGDPREP_OUTPUT_DIR"
DEFAULT_OUTPUT = "qgdprep-out"
EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGED = 0, 2, 3
TABLE1_BETAS = (0.0, 0.02, 0.04, 0.06, 0.08, 0.1)
TRAJECTORY_HEADER = ("step", "energy", "fidelity", "local_prob", "global_prob")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    model: str | None = None
    hamiltonian_file: str | None = None
    alphas: tuple[float, ...] | None = None
    epsilon: float | None = None
    mu: float | None = None
    identity_split: tuple[float, ...] | None = None
    max_steps: int = 500
    convergence_epsilon: float = 1e-6
    beta: float = 0.0
    noise_stage: str = "after"
    ancilla_source: str = "vqsp"
    layers: int | None = None
    entangler: str | None = None
    vqsp_epsilon: float = 1e-9
    restarts: int | None = None
    max_evals: int | None = None
    polish_evals: int | None = None
    phase_term: str | None = None
    shots: int = 0
    seed: int = 0
    output: str | None = None

    @property
    def rate(self) -> float:
        if self.mu is not None:
            return self.mu
        return analysis.rate_from_precision(self.epsilon if self.epsilon is not None else 1e-2)


# config-file key -> RunConfig field
CONFIG_KEYS = {
    "model.name": "model",
    "model.hamiltonian_file": "hamiltonian_file",
    "model.alphas": "alphas",
    "qgd.epsilon": "epsilon",
    "qgd.mu": "mu",
    "qgd.identity_split": "identity_split",
    "qgd.max_steps": "max_steps",
    "qgd.convergence_epsilon": "convergence_epsilon",
    "qgd.beta": "beta",
    "qgd.noise_stage": "noise_stage",
    "qgd.ancilla_source": "ancilla_source",
    "vqsp.layers": "layers",
    "vqsp.entangler": "entangler",
    "vqsp.epsilon_prime": "vqsp_epsilon",
    "vqsp.restarts": "restarts",
    "vqsp.max_evals": "max_evals",
    "vqsp.polish_evals": "polish_evals",
    "vqsp.phase_term": "phase_term",
    "vqsp.shots": "shots",
    "run.seed": "seed",
    "run.output": "output",
}
_FLOAT = {"epsilon", "mu", "convergence_epsilon", "beta", "vqsp_epsilon"}
_INT = {"max_steps", "layers", "restarts", "max_evals", "polish_evals", "shots", "seed"}
_TUPLE = {"alphas", "identity_split"}
_CHOICES = {
    "noise_stage": qgd.NOISE_STAGES,
    "ancilla_source": qgd.ANCILLA_SOURCES,
    "entangler": ("cz", "cry"),
    "phase_term": ("abs", "squared"),
    "model": tuple(models.PRESETS),
}


def _convert(name: str, raw, where: str):
    if raw is None:
        return None
    try:
        if name in _FLOAT:
            return float(raw)
        if name in _INT:
            return int(raw)
        if name in _TUPLE:
            if isinstance(raw, str):
                raw = raw.replace(",", " ").split()
            return tuple(float(x) for x in raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {raw!r} for {name}") from None
    if name in _CHOICES and raw not in _CHOICES[name]:
        raise ConfigError(f"{where}: {raw!r} is not one of {', '.join(_CHOICES[name])}")
    return raw


def load_config_file(path: str) -> dict:
    """Read an INI file into ``{field: value}``, rejecting unknown keys."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            flat = f"{section}.{key}"
            if flat not in CONFIG_KEYS:
                raise ConfigError(f"{path}: unknown key {flat!r}")
            name = CONFIG_KEYS[flat]
            values[name] = _convert(name, raw, f"{path}: key {flat}")
    return values


def build_run_config(args: argparse.Namespace) -> RunConfig:
    values = load_config_file(args.config) if getattr(args, "config", None) else {}
    flags = {}
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            flags[f.name] = _convert(f.name, v, f"--{f.name.replace('_', '-')}")
    if "mu" in flags or "epsilon" in flags:
        values.pop("mu", None)
        values.pop("epsilon", None)
    if "model" in flags or "hamiltonian_file" in flags:
        values.pop("model", None)
        values.pop("hamiltonian_file", None)
    values.update(flags)
    cfg = RunConfig(**values)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig):
    if cfg.mu is not None and cfg.epsilon is not None:
        raise ConfigError("give either mu or epsilon, not both")
    if cfg.mu is not None and not cfg.mu > 0:
        raise ConfigError(f"mu must be positive, got {cfg.mu}")
    if cfg.epsilon is not None and not cfg.epsilon > 0:
        raise ConfigError(f"epsilon must be positive, got {cfg.epsilon}")
    if (cfg.model is None) == (cfg.hamiltonian_file is None):
        raise ConfigError("give exactly one of a model preset and a Hamiltonian file")
    if not 0 <= cfg.beta <= 1:
        raise ConfigError(f"beta must lie in [0, 1], got {cfg.beta}")
    if cfg.max_steps < 1:
        raise ConfigError("max_steps must be at least 1")
    if not cfg.convergence_epsilon > 0 or not cfg.vqsp_epsilon > 0:
        raise ConfigError("convergence thresholds must be positive")
    if cfg.shots < 0:
        raise ConfigError("shots must be non-negative")


@dataclass(frozen=True)
class Problem:
    name: str
    hamiltonian: PauliHamiltonian
    initial_state: StateVector
    identity_split: tuple[float, ...] | None
    ansatz: vqsp.AnsatzSpec | None
    vqsp_options: dict


def resolve_problem(cfg: RunConfig) -> Problem:
    if cfg.model is not None:
        preset = models.preset(cfg.model)
        if cfg.alphas is not None:
            if preset.n == 2 and len(cfg.alphas) == 4:
                state = models.deuteron_initial_state(cfg.alphas)
            else:
                state = _product_state(preset.n, cfg.alphas)
        else:
            state = preset.initial_state()
        return Problem(preset.name, preset.hamiltonian, state, preset.identity_split, preset.ansatz,
                       dict(preset.vqsp_options))
    try:
        text = Path(cfg.hamiltonian_file).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read Hamiltonian file {cfg.hamiltonian_file}: {exc.strerror}") from None
    try:
        h = parse_hamiltonian(text)
    except HamiltonianFormatError as exc:
        raise ConfigError(f"{cfg.hamiltonian_file}: {exc}") from None
    if len(h) == 0:
        raise ConfigError(f"{cfg.hamiltonian_file}: all terms cancel")
    if h.n > 12:
        raise ConfigError(f"{cfg.hamiltonian_file}: {h.n} qubits exceeds the dense limit of 12")
    state = _product_state(h.n, cfg.alphas) if cfg.alphas is not None else StateVector.zero(h.n)
    return Problem(Path(cfg.hamiltonian_file).stem, h, state, None, None, {})


def _product_state(n, alphas):
    if len(alphas) != n:
        raise ConfigError(f"alphas has {len(alphas)} angles, the model has {n} qubits")
    return models.heisenberg_initial_state(n, alphas)


def _ansatz(cfg: RunConfig, problem: Problem, k_tilde: int) -> vqsp.AnsatzSpec:
    base = problem.ansatz if problem.ansatz is not None and problem.ansatz.qubits == k_tilde else None
    layers = cfg.layers or (base.layers if base else 3)
    entangler = cfg.entangler or (base.entangler if base else "cz")
    return vqsp.AnsatzSpec(k_tilde, layers, entangler)


def _vqsp_options(cfg: RunConfig, problem: Problem) -> dict:
    opts = {"restarts": 10, **problem.vqsp_options}
    opts["seed"] = problem.vqsp_options.get("seed", 0) + cfg.seed
    for key, value in (("restarts", cfg.restarts), ("max_evals", cfg.max_evals),
                       ("polish_evals", cfg.polish_evals), ("phase_term", cfg.phase_term)):
        if value is not None:
            opts[key] = value
    opts["epsilon_prime"] = cfg.vqsp_epsilon
    opts["shots"] = cfg.shots
    return opts


def qgd_config(cfg: RunConfig, problem: Problem, k_tilde: int | None = None, **overrides) -> qgd.QgdConfig:
    split = cfg.identity_split if cfg.identity_split is not None else problem.identity_split
    base = qgd.QgdConfig(
        hamiltonian=problem.hamiltonian,
        mu=cfg.mu,
        precision=None if cfg.mu is not None else (cfg.epsilon if cfg.epsilon is not None else 1e-2),
        identity_split=split,
        max_steps=cfg.max_steps,
        convergence_epsilon=cfg.convergence_epsilon,
        noise_beta=cfg.beta,
        noise_stage=cfg.noise_stage,
        ancilla_source=cfg.ancilla_source,
        initial_state=problem.initial_state,
        seed=cfg.seed,
    )
    k = base.lcu().k_tilde if k_tilde is None else k_tilde
    return replace(base, ansatz=_ansatz(cfg, problem, k), vqsp_options=_vqsp_options(cfg, problem), **overrides)


def output_dir(cfg: RunConfig) -> Path:
    path = Path(cfg.output or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_gnuplot(path: Path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# " + " ".join(header) + "\n")
        for row in rows:
            fh.write(" ".join(_fmt(v) for v in row) + "\n")


def write_summary(path: Path, items: dict):
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in items.items():
            fh.write(f"{key} = {_fmt(value)}\n")


def trajectory_rows(tr: qgd.Trajectory):
    return [(r.step, r.energy, r.fidelity, r.local_prob, r.global_prob) for r in tr.records]


def vqsp_rows(result: vqsp.VqspResult | None):
    """Evaluations at which the best-so-far cost improved, plus the last one."""
    if result is None or result.cost_history.size == 0:
        return []
    hist = result.cost_history
    keep = np.flatnonzero(np.diff(hist, prepend=np.inf) < 0)
    if keep[-1] != hist.size - 1:
        keep = np.append(keep, hist.size - 1)
    return [(int(i) + 1, float(hist[i])) for i in keep]


def _base_summary(cfg: RunConfig, problem: Problem, ref: analysis.SpectrumReport, mu: float):
    interval = analysis.learning_rate_interval(ref)
    ground = ref.ground_space()
    c0_sq = qgd.ground_overlap(problem.initial_state, ground)
    return {
        "model": problem.name,
        "qubits": problem.hamiltonian.n,
        "mu": mu,
        "seed": cfg.seed,
        "ground_energy": ref.ground_energy,
        "initial_overlap": c0_sq,
        "interval_upper": interval.upper,
        "interval_case": interval.case_tag,
        "mu_in_interval": interval.contains(mu),
        "degenerate_ground": interval.degenerate,
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_run(cfg: RunConfig, args) -> int:
    problem = resolve_problem(cfg)
    qc = qgd_config(cfg, problem)
    ref = analysis.spectrum(problem.hamiltonian)
    tr = qgd.run(qc, reference=ref)
    out = output_dir(cfg)
    rows = trajectory_rows(tr)
    write_csv(out / "trajectory.csv", TRAJECTORY_HEADER, rows)
    write_csv(out / "vqsp.csv", ("iteration", "cost"), vqsp_rows(tr.vqsp_result))
    if args.plot:
        write_gnuplot(out / "trajectory.dat", TRAJECTORY_HEADER, rows)
    last = tr.records[-1]
    summary = _base_summary(cfg, problem, ref, qc.rate)
    summary.update({
        "ancilla_source": qc.ancilla_source,
        "converged": tr.converged,
        "steps": last.step,
        "final_energy": last.energy,
        "energy_error": last.energy - tr.ground_energy,
        "relative_energy_error": (last.energy - tr.ground_energy) / abs(tr.ground_energy)
        if tr.ground_energy != 0 else math.inf,
        "final_fidelity": last.fidelity,
        "ground_overlap": last.overlap,
        "final_local_prob": last.local_prob,
        "final_global_prob": last.global_prob,
        "noise_beta": cfg.beta,
    })
    if tr.vqsp_result is not None:
        summary["vqsp_cost"] = tr.vqsp_result.final_cost
        summary["vqsp_fidelity"] = tr.vqsp_result.prepared_fidelity
    write_summary(out / "summary.txt", summary)
    print(f"{problem.name}: {'converged' if tr.converged else 'not converged'} after {last.step} steps, "
          f"E = {last.energy:.6f} (E0 = {tr.ground_energy:.6f}), fidelity = {last.fidelity:.6f}")
    if not summary["mu_in_interval"]:
        print(f"warning: mu = {qc.rate:.6g} lies outside (0, {summary['interval_upper']:.6g})")
    return EXIT_OK if tr.converged else EXIT_NONCONVERGED


def cmd_compare(cfg: RunConfig, args) -> int:
    problem = resolve_problem(cfg)
    qc = qgd_config(cfg, problem)
    ref = analysis.spectrum(problem.hamiltonian)
    ours = qgd.run(qc, reference=ref)
    fqe = baselines.fqe_run(qc, reference=ref)
    rows = [("qgd", r.step, r.energy, r.local_prob) for r in ours.records]
    rows += [("fqe", r.step, r.energy, r.local_prob) for r in fqe.records]
    if problem.hamiltonian.n == 2:
        res = baselines.vqe_run(problem.hamiltonian, seed=cfg.seed)
        rows += [("vqe", i + 1, e, 1.0) for i, e in enumerate(res.energy_history)]
    out = output_dir(cfg)
    write_csv(out / "compare.csv", ("method", "step", "energy", "prob"), rows)
    print(f"qgd: {ours.steps} steps, E = {ours.energies[-1]:.6f}; fqe: {fqe.steps} steps, "
          f"E = {fqe.energies[-1]:.6f}")
    return EXIT_OK if ours.converged and fqe.converged else EXIT_NONCONVERGED


def analyze_report(cfg: RunConfig) -> str:
    problem = resolve_problem(cfg)
    h = problem.hamiltonian
    mu = cfg.rate
    ref = analysis.spectrum(h, mu)
    interval = analysis.learning_rate_interval(ref)
    split = cfg.identity_split if cfg.identity_split is not None else problem.identity_split
    g = qgd.QgdConfig(h, mu=mu, identity_split=split).lcu()
    ground = ref.ground_space()
    c0 = math.sqrt(qgd.ground_overlap(problem.initial_state, ground))
    lam0 = 1 - 2 * mu * ref.ground_energy
    lines = [f"model: {problem.name} ({h.n} qubits, {len(h)} terms)", f"mu: {mu!r}", "",
             "  i  energy              |lambda_i|"]
    lams = ref.lambdas()
    for i, (e, lam) in enumerate(zip(ref.energies, lams)):
        lines.append(f"{i:3d}  {e: .10f}  {lam:.8f}")
    lines.append(f"dominant index: {ref.dominant_index()}")
    upper = "inf" if not interval.bounded else f"{interval.upper:.6f}"
    lines.append(f"learning-rate interval: (0, {upper})  [{interval.case_tag}]"
                 + ("  degenerate ground level" if interval.degenerate else ""))
    lines.append(f"mu inside interval: {'yes' if interval.contains(mu) else 'no'}")
    lines.append("")
    lines.append(f"LCU: {len(g.branches)} branches, k_tilde = {g.k_tilde}, N_y = {g.normalizer!r}")
    if c0 > 0 and lam0 != 0:
        b = qgd.sampling_bound(g, c0, lam0, problem.initial_state)
        lines.append(f"initial overlap |c0|^2: {c0 * c0:.6f}")
        lines.append(f"1/P(1) exact: {b.exact:.6f}")
        lines.append(f"1/P(1) bound, published form sum(y)/(lambda0^2 c0^2): {b.printed:.6f}")
        lines.append(f"1/P(1) bound, N_y^2/(lambda0^2 c0^2): {b.squared:.6f}")
    else:
        lines.append("initial state has no ground-state overlap")
    cost = analysis.gate_cost_estimate(h.locality, g.term_count, g.k_tilde)
    lines.append(f"gate cost T_total = l (K+1) k_tilde^2 = {h.locality}*{g.term_count + 1}*{g.k_tilde}^2 "
                 f"= {cost.t_total:g}")
    return "\n".join(lines) + "\n"


def cmd_analyze(cfg: RunConfig, args) -> int:
    sys.stdout.write(analyze_report(cfg))
    return EXIT_OK


def table1_rows(cfg: RunConfig, betas, readout_step: int | None = None):
    """One row per beta: (beta, step, relative energy error, Tr(|u0><u0| rho))."""
    problem = resolve_problem(cfg)
    ref = analysis.spectrum(problem.hamiltonian)
    clean = qgd_config(cfg, problem, noise_beta=0.0)
    u, _ = qgd.build_ancilla(clean, clean.lcu())
    if readout_step is None:
        readout_step = qgd.run(clean, ancilla_unitary=u, reference=ref).steps
    e0 = ref.ground_energy
    rows = []
    for beta in betas:
        noisy = replace(clean, noise_beta=float(beta), max_steps=readout_step, min_steps=readout_step)
        tr = qgd.run(noisy, ancilla_unitary=u, reference=ref)
        last = tr.records[-1]
        rows.append((float(beta), last.step, (last.energy - e0) / abs(e0), last.overlap))
    return rows


def cmd_table1(cfg: RunConfig, args) -> int:
    betas = args.betas if args.betas else TABLE1_BETAS
    if any(not 0 <= b <= 1 for b in betas):
        raise ConfigError("every beta must lie in [0, 1]")
    rows = table1_rows(cfg, betas, args.readout_step)
    out = output_dir(cfg)
    header = ("beta", "step", "relative_energy_error", "ground_overlap")
    write_csv(out / "table1.csv", header, rows)
    if args.plot:
        write_gnuplot(out / "table1.dat", header, rows)
    for beta, step, err, ov in rows:
        print(f"beta={beta:<5g} step={step:<4d} rel_energy_error={err:.4f} overlap={ov:.4f}")
    return EXIT_OK


def cmd_vqsp_train(cfg: RunConfig, args) -> int:
    problem = resolve_problem(cfg)
    qc = qgd_config(cfg, problem)
    g = qc.lcu()
    target = amplitude_vector(g)
    result = vqsp.train(qc.ansatz, target, **qc.vqsp_options)
    out = output_dir(cfg)
    write_csv(out / "vqsp.csv", ("iteration", "cost"), vqsp_rows(result))
    write_csv(out / "theta.csv", ("index", "theta"), list(enumerate(result.theta_opt)))
    write_summary(out / "summary.txt", {
        "model": problem.name,
        "mu": qc.rate,
        "seed": cfg.seed,
        "qubits": qc.ansatz.qubits,
        "layers": qc.ansatz.layers,
        "entangler": qc.ansatz.entangler,
        "parameters": qc.ansatz.num_params,
        "phase_term": qc.vqsp_options.get("phase_term", "abs"),
        "epsilon_prime": cfg.vqsp_epsilon,
        "final_cost": result.final_cost,
        "abs_cost": vqsp.cost_F(result.theta_opt, qc.ansatz, target),
        "prepared_fidelity": result.prepared_fidelity,
        "converged": result.converged,
        "evaluations": result.evaluations,
    })
    print(f"{problem.name}: cost {result.final_cost:.3e}, fidelity {result.prepared_fidelity:.6f}, "
          f"{result.evaluations} evaluations")
    return EXIT_OK if result.converged else EXIT_NONCONVERGED


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="INI file with section.key settings")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--model", help=f"preset: {'|'.join(models.PRESETS)}")
    src.add_argument("--hamiltonian", dest="hamiltonian_file", help="Hamiltonian text file")
    p.add_argument("--alphas", type=float, nargs="+", help="initial-state angles")
    rate = p.add_mutually_exclusive_group()
    rate.add_argument("--epsilon", type=float, help="precision; mu = sqrt(epsilon)/2 (default 1e-2)")
    rate.add_argument("--mu", type=float, help="learning rate")
    p.add_argument("--split", dest="identity_split", type=float, nargs="+", help="identity split weights")
    p.add_argument("--max-steps", type=int)
    p.add_argument("--conv-eps", dest="convergence_epsilon", type=float)
    p.add_argument("--beta", type=float, help="depolarizing strength per step")
    p.add_argument("--noise-stage", choices=qgd.NOISE_STAGES)
    p.add_argument("--ancilla", dest="ancilla_source", choices=qgd.ANCILLA_SOURCES)
    p.add_argument("--layers", type=int)
    p.add_argument("--entangler", choices=("cz", "cry"))
    p.add_argument("--vqsp-eps", dest="vqsp_epsilon", type=float)
    p.add_argument("--restarts", type=int)
    p.add_argument("--max-evals", type=int)
    p.add_argument("--polish-evals", type=int)
    p.add_argument("--phase-term", choices=("abs", "squared"))
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--output", help=f"output directory (default ${OUTPUT_ENV} or ./{DEFAULT_OUTPUT})")
    p.add_argument("--plot", action="store_true", help="also write gnuplot data files")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qgdprep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (("run", "run the iteration and write trajectory.csv"),
                            ("compare", "run this method and FQE (and VQE for 2 qubits) side by side"),
                            ("analyze", "print spectrum, rate interval, sampling bounds and gate cost"),
                            ("table1", "noise sweep over depolarizing strengths"),
                            ("vqsp-train", "train the ancilla-preparation circuit only")):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "table1":
            p.add_argument("--betas", type=float, nargs="+")
            p.add_argument("--readout-step", type=int,
                           help="step at which to read the metrics (default: noiseless convergence step)")
    return parser


COMMANDS = {"run": cmd_run, "compare": cmd_compare, "analyze": cmd_analyze, "table1": cmd_table1,
            "vqsp-train": cmd_vqsp_train}


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_run_config(args)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PostSelectionError as exc:
        print(f"run diverged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
