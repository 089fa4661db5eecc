"""
Run configuration

Campaigns are described by a sectioned key-value text file::

    # comment lines start with '#'
    [outer]
    shape = circle
    radius = 1

    [inclusion 1]
    radius = 0.5

    [interface 1]
    g = cos(theta)

Sections are ``[outer]``, ``[inclusion N]``, ``[coefficients]``,
``[subdomain N]``, ``[interface N]``, ``[exact N]``, ``[solver]`` and
``[campaign]``. Expression-valued keys hold one expression per component,
separated by ``;``. The file is tokenised with a lark grammar and each section
is validated by a pydantic model; semantic cross-checks (references to
missing inclusions, arities) happen on the assembled RunConfig.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import pydantic
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..exceptions import ParseError, ValidationError
from ..expressions import Expression, parse_expression
from ..utils.serialization import read_text

logger = logging.getLogger(__name__)

CAMPAIGN_KINDS = ("solve", "compare", "convergence", "probe", "mesh-info", "gap")

ini_grammar = r"""
    start: (_NL | header _NL | entry _NL)*

    header: "[" NAME INDEX? "]"
    entry: NAME "=" VALUE?

    NAME: /[A-Za-z_][A-Za-z0-9_]*/
    INDEX: /[0-9]+/
    VALUE: /[^\n]+/
    _NL: /\r?\n/
    COMMENT: /#[^\n]*/

    %ignore COMMENT
    %ignore /[ \t\r]+/
"""

INDEXED_SECTIONS = ("inclusion", "subdomain", "interface", "exact")
PLAIN_SECTIONS = ("outer", "coefficients", "solver", "campaign")
SUBDOMAIN_SCALARS = ("a", "a11", "a12", "a21", "a22")
SUBDOMAIN_LISTS = ("flux_x", "flux_y", "source")


@dataclass(frozen=True)
class RawValue:
    text: str
    line: int
    column: int


@dataclass
class RawSection:
    name: str
    index: Optional[int]
    line: int
    entries: Dict[str, RawValue] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return f"[{self.name}]" if self.index is None else f"[{self.name} {self.index}]"


@v_args(inline=True)
class _IniBuilder(Transformer):
    def header(self, name, index=None):
        return ("header", str(name), None if index is None else int(index), name.line)

    def entry(self, key, value=None):
        if value is None:
            return ("entry", str(key), RawValue("", key.line, key.column))
        return ("entry", str(key), RawValue(str(value).rstrip(), value.line, value.column))

    def start(self, *items):
        return list(items)


_ini_parser = Lark(ini_grammar, parser="lalr")


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)


class OuterSpec(_Section):
    """Outer boundary: a circle, an ellipse or an axis-aligned box."""

    shape: Literal["circle", "ellipse", "box"] = "circle"
    radius: float = Field(1.0, gt=0)
    semi_minor: Optional[float] = Field(None, gt=0)
    center: Tuple[float, float] = (0.0, 0.0)
    xmin: float = -1.0
    xmax: float = 1.0
    ymin: float = -1.0
    ymax: float = 1.0

    @field_validator("center", mode="before")
    @classmethod
    def split_center(cls, value):
        return _split_list(value)


class InclusionSpec(_Section):
    shape: Literal["circle", "ellipse", "perturbed_circle"] = "circle"
    radius: float = Field(gt=0)
    semi_minor: Optional[float] = Field(None, gt=0)
    center: Tuple[float, float] = (0.0, 0.0)
    parent: int = Field(0, ge=0)
    perturbation: List[Tuple[int, float]] = Field(default_factory=list)
    holder_exponent: float = Field(1.0, gt=0, le=1)

    @field_validator("center", mode="before")
    @classmethod
    def split_center(cls, value):
        return _split_list(value)

    @field_validator("perturbation", mode="before")
    @classmethod
    def split_modes(cls, value):
        # "k:amplitude, k:amplitude"
        if isinstance(value, str):
            return [tuple(part.split(":", 1)) for part in _split_list(value)]
        return value


class CoefficientsSpec(_Section):
    components: int = Field(1, ge=1)
    kappa: Optional[float] = Field(None, gt=0)


class SubdomainSpec(_Section):
    """Tensor (isotropic ``a`` or anisotropic ``a11 .. a22``), flux and source of one subdomain."""

    a: Optional[Any] = None
    a11: Optional[Any] = None
    a12: Optional[Any] = None
    a21: Optional[Any] = None
    a22: Optional[Any] = None
    flux_x: Optional[List[Any]] = None
    flux_y: Optional[List[Any]] = None
    source: Optional[List[Any]] = None

    @model_validator(mode="after")
    def one_tensor_form(self):
        anisotropic = [self.a11, self.a12, self.a21, self.a22]
        if self.a is not None and any(v is not None for v in anisotropic):
            raise ValueError("give either a or a11, a12, a21, a22")
        if any(v is not None for v in anisotropic) and any(v is None for v in anisotropic):
            raise ValueError("anisotropic tensors need all of a11, a12, a21, a22")
        if (self.flux_x is None) != (self.flux_y is None):
            raise ValueError("flux_x and flux_y must be given together")
        return self

    @property
    def anisotropic(self) -> bool:
        return self.a11 is not None


class InterfaceSpec(_Section):
    g: List[Any]


class ExactSpec(_Section):
    u: List[Any]


class SolverSpec(_Section):
    order: int = Field(1, ge=1, le=2)
    h: float = Field(0.1, gt=0)
    levels: int = Field(4, ge=1)
    method: Literal["reduction", "direct", "multi"] = "reduction"
    tol_lin: Optional[float] = Field(None, gt=0)
    linear_solver: Optional[Literal["cg", "direct"]] = None
    alpha: float = Field(0.5, gt=0, le=1)
    rho_factor: float = Field(4.0, gt=0)


class CampaignSpec(_Section):
    kind: Literal["solve", "compare", "convergence", "probe", "mesh-info", "gap"] = "solve"
    out: str = "results"
    seed: Optional[int] = None
    center: Optional[Tuple[float, float]] = None
    r0: Optional[float] = Field(None, gt=0)
    mu: float = Field(0.5, gt=0, lt=1)
    probe_levels: int = Field(5, ge=1)
    one_sided: bool = False
    deltas: List[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05])

    @field_validator("center", "deltas", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)


class RunConfig(BaseModel):
    """Validated campaign configuration."""

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    outer: OuterSpec = Field(default_factory=OuterSpec)
    inclusions: Dict[int, InclusionSpec] = Field(default_factory=dict)
    coefficients: CoefficientsSpec = Field(default_factory=CoefficientsSpec)
    subdomains: Dict[int, SubdomainSpec] = Field(default_factory=dict)
    interfaces: Dict[int, InterfaceSpec] = Field(default_factory=dict)
    exact: Dict[int, ExactSpec] = Field(default_factory=dict)
    solver: SolverSpec = Field(default_factory=SolverSpec)
    campaign: CampaignSpec = Field(default_factory=CampaignSpec)
    source_name: str = "<config>"

    @property
    def components(self) -> int:
        return self.coefficients.components

    @property
    def subdomain_count(self) -> int:
        return len(self.inclusions) + 1

    @model_validator(mode="after")
    def check_references(self):
        k = len(self.inclusions)
        if sorted(self.inclusions) != list(range(1, k + 1)):
            raise ValidationError(f"inclusions must be numbered 1..{k}, got {sorted(self.inclusions)}",
                                  error_code="BAD_REFERENCE")
        for j, spec in self.inclusions.items():
            if spec.parent > k or spec.parent == j:
                raise ValidationError(f"[inclusion {j}] parent: no inclusion {spec.parent}",
                                      error_code="BAD_REFERENCE")
        for tag in self.subdomains:
            if not 1 <= tag <= k + 1:
                raise ValidationError(f"[subdomain {tag}]: subdomain {tag} does not exist "
                                      f"(config has {k + 1} subdomains)", error_code="BAD_REFERENCE")
        for j in self.interfaces:
            if not 1 <= j <= k:
                raise ValidationError(f"[interface {j}]: interface {j} does not exist "
                                      f"(config has {k} interfaces)", error_code="BAD_REFERENCE")
        for tag in self.exact:
            if not 1 <= tag <= k + 1:
                raise ValidationError(f"[exact {tag}]: subdomain {tag} does not exist", error_code="BAD_REFERENCE")
        if self.exact and sorted(self.exact) != list(range(1, k + 2)):
            missing = sorted(set(range(1, k + 2)) - set(self.exact))
            raise ValidationError(f"[exact]: exact solution missing for subdomains {missing}",
                                  error_code="BAD_REFERENCE")
        self._check_arities()
        return self

    def _check_arities(self):
        n = self.components
        checks = []
        for tag, spec in self.subdomains.items():
            checks += [(f"[subdomain {tag}] {key}", getattr(spec, key)) for key in SUBDOMAIN_LISTS]
        checks += [(f"[interface {j}] g", spec.g) for j, spec in self.interfaces.items()]
        checks += [(f"[exact {tag}] u", spec.u) for tag, spec in self.exact.items()]
        for key, exprs in checks:
            if exprs is not None and len(exprs) != n:
                raise ValidationError(f"{key}: {len(exprs)} expression(s) given, {n} component(s) declared",
                                      error_code="ARITY")

    def with_overrides(self, **overrides) -> "RunConfig":
        """
        Copy with command-line overrides applied.

        Recognised keys: kind, out, seed, center, mu, order, h, levels
        (solver levels, or probe levels for probe campaigns). None values are
        ignored.
        """
        given = {k: v for k, v in overrides.items() if v is not None}
        solver = {k: given[k] for k in ("order", "h") if k in given}
        campaign = {k: given[k] for k in ("kind", "out", "seed", "mu") if k in given}
        if "center" in given:
            campaign["center"] = tuple(float(c) for c in given["center"])
        if "levels" in given:
            if campaign.get("kind", self.campaign.kind) == "probe":
                campaign["probe_levels"] = int(given["levels"])
            else:
                solver["levels"] = int(given["levels"])
        try:
            return RunConfig(**{
                **{name: getattr(self, name) for name in type(self).model_fields},
                "solver": SolverSpec(**{**self.solver.model_dump(), **solver}),
                "campaign": CampaignSpec(**{**self.campaign.model_dump(), **campaign}),
            })
        except pydantic.ValidationError as exc:
            raise ValidationError(f"invalid override: {_first_error(exc)}") from None


def _first_error(exc: pydantic.ValidationError) -> str:
    error = exc.errors()[0]
    location = ".".join(str(part) for part in error.get("loc", ()))
    return f"{location}: {error.get('msg')}" if location else str(error.get("msg"))


def _sections(text: str) -> List[RawSection]:
    try:
        items = _IniBuilder().transform(_ini_parser.parse(text if text.endswith("\n") else text + "\n"))
    except UnexpectedInput as exc:
        line, column = getattr(exc, "line", None), getattr(exc, "column", None)
        raise ParseError("invalid configuration syntax", line if line and line > 0 else None,
                         column if line and line > 0 else None) from None
    sections: List[RawSection] = []
    seen = set()
    for item in items:
        if item[0] == "header":
            _, name, index, line = item
            section = RawSection(name, index, line)
            if name in INDEXED_SECTIONS and index is None:
                raise ParseError(f"section [{name}] needs an index", line, 1)
            if name in PLAIN_SECTIONS and index is not None:
                raise ParseError(f"section [{name}] takes no index", line, 1)
            if name not in INDEXED_SECTIONS and name not in PLAIN_SECTIONS:
                raise ValidationError(f"{section.label}: unknown section (line {line})", error_code="UNKNOWN_SECTION")
            if (name, index) in seen:
                raise ValidationError(f"{section.label}: duplicate section (line {line})",
                                      error_code="DUPLICATE_SECTION")
            seen.add((name, index))
            sections.append(section)
            continue
        _, key, value = item
        if not sections:
            raise ParseError(f"key {key!r} outside of any section", value.line, value.column)
        current = sections[-1]
        if key in current.entries:
            raise ValidationError(f"{current.label} {key}: duplicate key (line {value.line})",
                                  error_code="DUPLICATE_KEY")
        current.entries[key] = value
    return sections


def _expression_list(value: RawValue) -> List[Expression]:
    exprs, start = [], 0
    for piece in value.text.split(";"):
        if not piece.strip():
            raise ParseError("empty expression", value.line, value.column + start)
        exprs.append(parse_expression(piece, line_offset=value.line - 1, column_offset=value.column - 1 + start))
        start += len(piece) + 1
    return exprs


def _expression(value: RawValue) -> Expression:
    exprs = _expression_list(value)
    if len(exprs) != 1:
        raise ParseError("expected a single expression", value.line, value.column)
    return exprs[0]


def _section_values(section: RawSection) -> Dict[str, Any]:
    values = {}
    for key, raw in section.entries.items():
        if section.name == "subdomain" and key in SUBDOMAIN_SCALARS:
            values[key] = _expression(raw)
        elif (section.name == "subdomain" and key in SUBDOMAIN_LISTS) or (section.name, key) in (
                ("interface", "g"), ("exact", "u")):
            values[key] = _expression_list(raw)
        else:
            values[key] = raw.text
    return values


_SECTION_MODELS = {
    "outer": OuterSpec,
    "inclusion": InclusionSpec,
    "coefficients": CoefficientsSpec,
    "subdomain": SubdomainSpec,
    "interface": InterfaceSpec,
    "exact": ExactSpec,
    "solver": SolverSpec,
    "campaign": CampaignSpec,
}


def _section_model(section: RawSection):
    try:
        return _SECTION_MODELS[section.name](**_section_values(section))
    except pydantic.ValidationError as exc:
        error = exc.errors()[0]
        key = ".".join(str(part) for part in error.get("loc", ()))
        line = section.entries[key].line if key in section.entries else section.line
        label = f"{section.label} {key}" if key else section.label
        raise ValidationError(f"{label}: {error.get('msg')} (line {line})", error_code="INVALID_VALUE",
                              details={"line": line, "key": key}) from None


def parse_config(text: str, source_name: str = "<config>") -> RunConfig:
    """
    Parse and validate a run configuration.

    Args:
        text: Configuration text
        source_name: Name used in log messages

    Returns:
        RunConfig

    Raises:
        ParseError: On syntax errors (with line and column)
        ValidationError: On semantic errors, naming the offending key
    """
    data: Dict[str, Any] = {"inclusions": {}, "subdomains": {}, "interfaces": {}, "exact": {},
                            "source_name": source_name}
    plural = {"inclusion": "inclusions", "subdomain": "subdomains", "interface": "interfaces", "exact": "exact"}
    for section in _sections(text):
        model = _section_model(section)
        if section.index is None:
            data[section.name] = model
        else:
            data[plural[section.name]][section.index] = model
    config = RunConfig(**data)
    logger.debug(f"parsed {source_name}: {config.subdomain_count} subdomains, campaign {config.campaign.kind}")
    return config


def load_config(path: Union[str, Path]) -> RunConfig:
    """Read and parse a configuration file."""
    return parse_config(read_text(path), source_name=str(path))
