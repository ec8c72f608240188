"""
Configuração de execução (RunConfig).

Formato: texto plano ``chave = valor``, uma por linha, com comentários ``#``.
Chaves desconhecidas ou repetidas são rejeitadas com o número da linha.
Números reais são serializados com 17 dígitos significativos, o que garante
a ida-e-volta exata de floats de 64 bits.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from core.cn import Grid, HeatProblem
from core.exceptions import ConfigError
from core.rm import NOISE_KINDS, NoiseModel, RMConfig

HEADER_PREFIX = "# config: "
SOLVER_CHOICES = ("direct", "rm")
LANG_CHOICES = ("pt", "en")
# tabelas de normas do produto ocupam (k_max + 1)² doubles
K_MAX_LIMIT = 5000


# =============================================================================
# Seletores de condição inicial e de contorno
# =============================================================================

def _const_value(selector: str) -> float:
    try:
        return float(selector.split(":", 1)[1])
    except (IndexError, ValueError):
        raise ValueError(f"bad constant selector {selector!r}, expected const:<value>") from None


def initial_profile(selector: str, x_lo: float, x_hi: float) -> Callable[[float], float]:
    """sine | hat | const:<v>, sobre [x_lo, x_hi]."""
    L = x_hi - x_lo
    if selector == "sine":
        return lambda x: math.sin(math.pi * (x - x_lo) / L)
    if selector == "hat":
        return lambda x: 1.0 - abs(2.0 * (x - x_lo) / L - 1.0)
    if selector.startswith("const:"):
        v = _const_value(selector)
        return lambda x: v
    raise ValueError(f"unknown initial selector {selector!r} (sine | hat | const:<v>)")


def boundary_profile(selector: str) -> Callable[[float], float]:
    """zero | const:<v> | sine_t:<amp>:<omega>."""
    if selector == "zero":
        return lambda t: 0.0
    if selector.startswith("const:"):
        v = _const_value(selector)
        return lambda t: v
    if selector.startswith("sine_t:"):
        try:
            _, amp, omega = selector.split(":")
            amp, omega = float(amp), float(omega)
        except ValueError:
            raise ValueError(f"bad selector {selector!r}, expected sine_t:<amp>:<omega>") from None
        return lambda t: amp * math.sin(omega * t)
    raise ValueError(f"unknown boundary selector {selector!r} (zero | const:<v> | sine_t:<amp>:<omega>)")


# =============================================================================
# RunConfig
# =============================================================================

def _int_list(text: str) -> tuple:
    return tuple(int(part) for part in text.split(",") if part.strip())


@dataclass(frozen=True)
class RunConfig:
    # problema
    d: float = 1.0
    x_lo: float = 0.0
    x_hi: float = 1.0
    initial: str = "sine"
    boundary_lo: str = "zero"
    boundary_hi: str = "zero"
    # grade
    n: int = 10
    m: int = 5
    t_end: float = 0.05
    solver: str = "direct"
    # robbins–monro
    k: int = 100000
    gain: float = 1.0
    theta: float = 1.0
    noise: str = "uniform"
    b: float = 0.1
    noise_mean: float = 0.0
    tol: Optional[float] = None
    # estudos
    epsilon: Optional[float] = None
    replications: int = 200
    pilot_replications: int = 10
    checkpoints: tuple = (100, 1000, 10000, 100000)
    k_max: int = 2000
    levels: int = 4
    recursion_k: int = 100
    alpha: Optional[float] = None
    p: Optional[float] = None
    workers: int = 0
    rate_tolerance: float = 0.25
    # execução
    seed: int = 20240917
    out: Optional[str] = None
    lang: str = "pt"

    # ----- construção de objetos do núcleo -----
    def problem(self) -> HeatProblem:
        return HeatProblem(
            D=self.d,
            x_lo=self.x_lo,
            x_hi=self.x_hi,
            f=initial_profile(self.initial, self.x_lo, self.x_hi),
            g_lo=boundary_profile(self.boundary_lo),
            g_hi=boundary_profile(self.boundary_hi),
        )

    def grid(self, problem: Optional[HeatProblem] = None) -> Grid:
        return Grid.build(problem or self.problem(), self.n, self.m, self.t_end)

    def rm_config(self, x_init=None, record_noise: bool = False, checkpoints=None) -> RMConfig:
        return RMConfig(
            max_iters=self.k,
            gain=self.gain,
            x_init=None if x_init is None else np.asarray(x_init, dtype=np.float64),
            seed=self.seed,
            checkpoints=self.checkpoints if checkpoints is None else checkpoints,
            theta=self.theta,
            tol=self.tol,
            record_noise=record_noise,
        )

    def noise_model(self, dim: int) -> NoiseModel:
        if self.noise == "zero":
            return NoiseModel("zero", dim, 0.0, self.noise_mean)
        return NoiseModel.uniform(dim, self.b, self.noise_mean)

    @property
    def has_analytic(self) -> bool:
        return self.initial == "sine" and self.boundary_lo == "zero" and self.boundary_hi == "zero"

    # ----- serialização -----
    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            lines.append(f"{f.name} = {_format_value(value)}")
        return "\n".join(lines) + "\n"

    def canonical(self) -> "RunConfig":
        """A configuração que determina o relatório (sem o caminho de saída)."""
        return replace(self, out=None)

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().to_text().encode("utf-8")).hexdigest()

    def header_lines(self, command: str) -> list:
        lines = [f"# heatrm {command} seed={self.seed} config_sha256={self.config_hash}"]
        lines += [HEADER_PREFIX + line for line in self.canonical().to_text().splitlines()]
        return lines


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    return str(value)


_OPTIONAL_FLOATS = {"tol", "epsilon", "alpha", "p"}

_CONVERTERS: dict[str, Callable[[str], object]] = {}
for _f in fields(RunConfig):
    if _f.name in _OPTIONAL_FLOATS:
        _CONVERTERS[_f.name] = float
    elif _f.name == "checkpoints":
        _CONVERTERS[_f.name] = _int_list
    elif _f.name == "out":
        _CONVERTERS[_f.name] = str
    elif isinstance(_f.default, float):
        _CONVERTERS[_f.name] = float
    elif isinstance(_f.default, int):
        _CONVERTERS[_f.name] = int
    else:
        _CONVERTERS[_f.name] = str


# =============================================================================
# Validação
# =============================================================================

def validate(cfg: RunConfig) -> list:
    """Lista de (chave, mensagem) com todas as violações."""
    problems = []

    def need(ok: bool, key: str, message: str):
        if not ok:
            problems.append((key, message))

    for name in ("d", "x_lo", "x_hi", "t_end", "gain", "theta", "b", "noise_mean", "rate_tolerance"):
        need(math.isfinite(getattr(cfg, name)), name, "must be finite")
    need(cfg.d >= 0.0, "d", "diffusivity must be >= 0")
    need(cfg.x_hi > cfg.x_lo, "x_hi", "x_hi must exceed x_lo")
    need(cfg.n >= 2, "n", "N must be >= 2")
    need(cfg.m >= 1, "m", "M must be >= 1")
    need(cfg.t_end > 0.0, "t_end", "t_end must be > 0")
    need(cfg.solver in SOLVER_CHOICES, "solver", f"solver must be one of {SOLVER_CHOICES}")
    need(cfg.k >= 1, "k", "K must be >= 1")
    need(cfg.gain > 0.0, "gain", "gain must be > 0")
    need(cfg.theta > 0.0, "theta", "theta must be > 0")
    need(cfg.noise in NOISE_KINDS, "noise", f"noise must be one of {NOISE_KINDS}")
    need(cfg.noise == "zero" or cfg.b > 0.0, "b", "noise bound b must be > 0")
    need(cfg.tol is None or cfg.tol > 0.0, "tol", "tol must be > 0")
    need(cfg.epsilon is None or cfg.epsilon > 0.0, "epsilon", "epsilon must be > 0")
    need(cfg.replications >= 2, "replications", "need at least 2 replications")
    need(cfg.pilot_replications >= 1, "pilot_replications", "need at least 1 pilot replication")
    cps = cfg.checkpoints
    need(len(cps) >= 1, "checkpoints", "at least one checkpoint is required")
    need(all(b > a for a, b in zip(cps, cps[1:])), "checkpoints", "checkpoints must be strictly increasing")
    need(not cps or (cps[0] >= 1 and cps[-1] <= cfg.k), "checkpoints", "checkpoints must lie in [1, k]")
    need(cfg.k_max >= 2, "k_max", "k_max must be >= 2")
    need(cfg.k_max <= K_MAX_LIMIT, "k_max", f"k_max must be <= {K_MAX_LIMIT}")
    need(cfg.levels >= 1, "levels", "levels must be >= 1")
    need(cfg.recursion_k >= 1, "recursion_k", "recursion_k must be >= 1")
    need(cfg.alpha is None or cfg.alpha > 0.0, "alpha", "alpha must be > 0")
    need(cfg.p is None or cfg.p > 0.0, "p", "p must be > 0")
    need(cfg.workers >= 0, "workers", "workers must be >= 0")
    need(0 <= cfg.seed < 2**64, "seed", "seed must be an unsigned 64-bit integer")
    need(cfg.lang in LANG_CHOICES, "lang", f"lang must be one of {LANG_CHOICES}")

    try:
        initial_profile(cfg.initial, cfg.x_lo, cfg.x_hi)
    except ValueError as exc:
        problems.append(("initial", str(exc)))
    for key in ("boundary_lo", "boundary_hi"):
        try:
            boundary_profile(getattr(cfg, key))
        except ValueError as exc:
            problems.append((key, str(exc)))
    return problems


# =============================================================================
# Leitura
# =============================================================================

def parse_config(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    """
    Lê o texto ``chave = valor`` sobre ``base`` (padrões se ausente).

    Raises
    ------
    ConfigError
        Com o número da linha do primeiro problema encontrado.
    """
    values = {}
    lines_of = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONVERTERS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno)
        try:
            values[key] = _CONVERTERS[key](value)
        except ValueError:
            raise ConfigError(f"invalid value {value!r} for {key!r}", lineno) from None
        lines_of[key] = lineno

    cfg = replace(base or RunConfig(), **values)
    problems = validate(cfg)
    if problems:
        key, message = problems[0]
        raise ConfigError(f"{key}: {message}", lines_of.get(key))
    return cfg


def load_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc.strerror}") from None
    return parse_config(text)


def config_from_header(text: str) -> RunConfig:
    """Reconstrói o RunConfig a partir das linhas ``# config:`` de um CSV."""
    lines = [line[len(HEADER_PREFIX):] for line in text.splitlines() if line.startswith(HEADER_PREFIX)]
    return parse_config("\n".join(lines))
