"""Strict JSON configuration for models and runs (unknown fields error)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import ConfigError
from ..geometry import MarkedPoint, PointSequence, Window
from ..marks import NO_MARKS, MarkDistribution
from .pairwise import pairwise_quadratic_model
from .poisson import PoissonModel
from .scaling import ScalingTransform, scaled_model
from .softcore import SoftCoreModel
from .ssi import LocationDensity, SSIModel, uniform_location_density

MODEL_KINDS = ("softcore", "ssi", "pairwise_quadratic", "scaled", "poisson")


def _strict(d: dict, allowed: set[str], where: str) -> None:
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected an object, got {type(d).__name__}")
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown fields {sorted(unknown)}")


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}: missing required field {key!r}")
    return d[key]


def _number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {v!r}")
    return float(v)


def parse_window(d: dict, where: str = "window") -> Window:
    _strict(d, {"x0", "y0", "x1", "y1"}, where)
    try:
        return Window(*(_number(_need(d, k, where), f"{where}.{k}") for k in ("x0", "y0", "x1", "y1")))
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"{where}: {exc}")


def parse_marks(d: dict, where: str = "marks") -> MarkDistribution:
    kind = _need(d, "kind", where)
    try:
        if kind == "none":
            _strict(d, {"kind"}, where)
            return NO_MARKS
        if kind == "radius":
            family = _need(d, "family", where)
            if family == "uniform":
                _strict(d, {"kind", "family", "lo", "hi"}, where)
                return MarkDistribution(
                    "radius",
                    family="uniform",
                    params=(
                        _number(_need(d, "lo", where), f"{where}.lo"),
                        _number(_need(d, "hi", where), f"{where}.hi"),
                    ),
                )
            if family == "point":
                _strict(d, {"kind", "family", "value"}, where)
                return MarkDistribution(
                    "radius", family="point", params=(_number(_need(d, "value", where), f"{where}.value"),)
                )
            raise ConfigError(f"{where}.family: unknown family {family!r}")
        if kind == "label":
            _strict(d, {"kind", "labels", "weights"}, where)
            return MarkDistribution(
                "label",
                labels=tuple(_need(d, "labels", where)),
                weights=tuple(d.get("weights", ())),
            )
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"{where}: {exc}")
    raise ConfigError(f"{where}.kind: unknown mark kind {kind!r}")


def _parse_pi(d: dict, window: Window, where: str) -> LocationDensity:
    kind = _need(d, "kind", where)
    if kind == "uniform":
        _strict(d, {"kind"}, where)
        return uniform_location_density(window)
    if kind == "boxes":
        _strict(d, {"kind", "boxes"}, where)
        boxes = tuple(tuple(_number(v, where) for v in b) for b in _need(d, "boxes", where))
        try:
            return LocationDensity("boxes", window, boxes=boxes)
        except Exception as exc:
            raise ConfigError(f"{where}: {exc}")
    raise ConfigError(f"{where}.kind: unknown location density {kind!r}")


def _parse_counts(q, where: str) -> tuple[float, ...]:
    """Count weights: an explicit list, or the truncated-Poisson family
    (the stock choice for adsorption runs, where no canonical law exists)."""
    if isinstance(q, dict):
        _strict(q, {"truncated_poisson"}, where)
        fam = _need(q, "truncated_poisson", where)
        _strict(fam, {"rate", "n_max"}, f"{where}.truncated_poisson")
        from .ssi import truncated_poisson_weights

        try:
            return truncated_poisson_weights(
                _number(_need(fam, "rate", where), f"{where}.rate"),
                int(_need(fam, "n_max", where)),
            )
        except Exception as exc:
            raise ConfigError(f"{where}: {exc}")
    return tuple(_number(v, where) for v in q)


def _scale_marks(marks: MarkDistribution, c2: float) -> MarkDistribution:
    if marks.kind != "radius":
        return marks
    return MarkDistribution(
        "radius", family=marks.family, params=tuple(c2 * p for p in marks.params)
    )


def parse_model(cfg: dict, where: str = "config"):
    """Model object from a config holding "model" and "window" fields."""
    _strict(cfg, {"model", "window"}, where)
    window = parse_window(_need(cfg, "window", where), f"{where}.window")
    spec = _need(cfg, "model", where)
    kind = _need(spec, "kind", f"{where}.model")
    w = f"{where}.model"
    try:
        if kind == "softcore":
            _strict(spec, {"kind", "beta", "gamma", "variant", "marks"}, w)
            return SoftCoreModel(
                window=window,
                beta=_number(_need(spec, "beta", w), f"{w}.beta"),
                gamma=_number(_need(spec, "gamma", w), f"{w}.gamma"),
                marks=parse_marks(_need(spec, "marks", w), f"{w}.marks"),
                variant=spec.get("variant", "settler"),
            )
        if kind == "ssi":
            _strict(spec, {"kind", "pi", "r", "q", "quadrature_resolution"}, w)
            step = spec.get("quadrature_resolution")
            return SSIModel(
                window=window,
                pi=_parse_pi(_need(spec, "pi", w), window, f"{w}.pi"),
                r=_number(_need(spec, "r", w), f"{w}.r"),
                q=_parse_counts(_need(spec, "q", w), f"{w}.q"),
                quadrature_step=_number(step, f"{w}.quadrature_resolution") if step is not None else None,
            )
        if kind == "pairwise_quadratic":
            _strict(spec, {"kind", "first_order", "range", "marks"}, w)
            rng_spec = _need(spec, "range", w)
            marks = parse_marks(spec.get("marks", {"kind": "none"}), f"{w}.marks")
            first = _number(_need(spec, "first_order", w), f"{w}.first_order")
            if isinstance(rng_spec, dict):
                _strict(rng_spec, {"mark_scale"}, f"{w}.range")
                return pairwise_quadratic_model(
                    window,
                    range_mark_scale=_number(_need(rng_spec, "mark_scale", f"{w}.range"), f"{w}.range.mark_scale"),
                    first_order=first,
                    marks=marks,
                )
            return pairwise_quadratic_model(
                window,
                range_const=_number(rng_spec, f"{w}.range"),
                first_order=first,
                marks=marks,
            )
        if kind == "scaled":
            _strict(spec, {"kind", "template", "c1", "c2", "bounds"}, w)
            template = parse_model(
                {"model": _need(spec, "template", w), "window": cfg["window"]},
                f"{w}.template",
            )
            c1 = _number(_need(spec, "c1", w), f"{w}.c1")
            c2 = _number(_need(spec, "c2", w), f"{w}.c2")
            bounds = spec.get("bounds", [min(c1, c2), max(c1, c2)])
            transform = ScalingTransform(
                template=template,
                c1=lambda p: c1,
                c2=lambda p: c2,
                c_lo=_number(bounds[0], f"{w}.bounds"),
                c_hi=_number(bounds[1], f"{w}.bounds"),
            )
            scaled_window = Window(
                c1 * template.window.x0,
                c1 * template.window.y0,
                c1 * template.window.x1,
                c1 * template.window.y1,
            )
            return scaled_model(transform, scaled_window, _scale_marks(template.marks, c2))
        if kind == "poisson":
            _strict(spec, {"kind", "beta", "marks"}, w)
            return PoissonModel(
                window=window,
                beta=_number(_need(spec, "beta", w), f"{w}.beta"),
                marks=parse_marks(spec.get("marks", {"kind": "none"}), f"{w}.marks"),
            )
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"{w}: {exc}")
    raise ConfigError(f"{w}.kind: unknown model kind {kind!r} (one of {MODEL_KINDS})")


def parse_initial(entries, where: str) -> PointSequence:
    pts = []
    for j, e in enumerate(entries):
        if not isinstance(e, (list, tuple)) or len(e) not in (2, 3):
            raise ConfigError(f"{where}[{j}]: expected [x, y] or [x, y, mark]")
        mark = e[2] if len(e) == 3 else None
        if mark is not None and not isinstance(mark, str):
            mark = _number(mark, f"{where}[{j}].mark")
        pts.append(MarkedPoint(_number(e[0], where), _number(e[1], where), mark))
    return PointSequence(pts)


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; every result-affecting field lands in the
    emitted metadata so runs can be reproduced from their meta.json."""

    model: object
    raw: dict
    sampler: dict | None
    oracle: dict | None
    output_dir: str
    seed: int
    chains: int


_SAMPLER_KEYS = {
    "mh": {"kind", "steps", "record_every", "initial"},
    "bd": {"kind", "t_max", "beta", "n_cap", "epoch_dt", "initial"},
}
_ORACLE_KEYS = {
    "cells",
    "n_max",
    "mark_levels",
    "budget",
    "mh_steps",
    "bd_t_max",
    "max_set_size",
}


def parse_run_config(data: dict, where: str = "config") -> RunConfig:
    _strict(
        data,
        {"model", "window", "sampler", "oracle", "output_dir", "seed", "chains"},
        where,
    )
    model = parse_model({"model": _need(data, "model", where), "window": _need(data, "window", where)}, where)
    sampler = data.get("sampler")
    if sampler is not None:
        kind = _need(sampler, "kind", f"{where}.sampler")
        if kind not in _SAMPLER_KEYS:
            raise ConfigError(f"{where}.sampler.kind: unknown sampler {kind!r}")
        _strict(sampler, _SAMPLER_KEYS[kind], f"{where}.sampler")
    oracle = data.get("oracle")
    if oracle is not None:
        _strict(oracle, _ORACLE_KEYS, f"{where}.oracle")
    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"{where}.seed: expected an integer")
    chains = data.get("chains", 1)
    if isinstance(chains, bool) or not isinstance(chains, int) or chains < 1:
        raise ConfigError(f"{where}.chains: expected a positive integer")
    return RunConfig(
        model=model,
        raw=data,
        sampler=sampler,
        oracle=oracle,
        output_dir=data.get("output_dir", "."),
        seed=seed,
        chains=chains,
    )


def load_run_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")
    # an emitted meta.json embeds the originating config; accept it directly
    # so any run can be reproduced from its own metadata
    if isinstance(data, dict) and "version" in data and "config" in data:
        data = data["config"]
    return parse_run_config(data)
