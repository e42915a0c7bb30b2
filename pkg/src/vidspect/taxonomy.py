"""Three-layer artifact taxonomy: canonical tree, label resolution, distributions.

The tree has two top-level families (perceptual-quality forgeries and
real-world-law violations), eight mid-level categories, and twenty-three
observable leaf artifacts. Nodes are addressed by stable snake_case codes;
display names are what annotation tools and model outputs carry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping


class Level(str, Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"


@dataclass(frozen=True)
class TaxonomyNode:
    code: str
    display_name: str
    level: Level
    parent_code: str | None
    definition: str


@dataclass(frozen=True)
class TaxonomyPath:
    """A validated chain of codes from L1 down to an optional L3.

    Partial paths (l2/l3 absent) are legal: block counting in the response
    grammar is syntactic, so annotations may stop at any depth. Deep
    validation flags them separately.
    """

    l1: str
    l2: str | None = None
    l3: str | None = None

    @property
    def deepest(self) -> str:
        return self.l3 or self.l2 or self.l1

    @property
    def is_full(self) -> bool:
        return self.l3 is not None


class UnknownLabel(ValueError):
    """Raised when free-form label text matches no canonical node."""

    def __init__(self, text: str):
        super().__init__(f"unknown taxonomy label: {text!r}")
        self.text = text


class InvalidPath(ValueError):
    """Raised when (l1, l2, l3) does not form an ancestor chain."""


def _slug(name: str) -> str:
    out = []
    for ch in name.lower():
        if ch.isalnum():
            out.append(ch)
        elif out and out[-1] != "_":
            out.append("_")
    return "".join(out).strip("_")


# (display name, definition) per node; structure carries the hierarchy.
_TREE_SPEC: list[tuple[str, str, list[tuple[str, str, list[tuple[str, str]]]]]] = [
    (
        "Low-Level Forgery",
        "Perceptual-quality defects characteristic of synthesis pipelines; they look wrong without breaking any physical law.",
        [
            (
                "Texture Anomaly",
                "Local surface patterns that are distorted, unstable, or blurred in ways natural footage never is.",
                [
                    ("Structure Anomaly", "Regular structures such as fences, grids, or lattices bend, twist, or interlace implausibly."),
                    ("Texture Jittering", "Surface detail flickers or crawls between frames instead of staying attached to the object."),
                    ("Unnatural Blur", "Blur that is spatially selective or temporally unstable, unlike optical or compression blur."),
                ],
            ),
            (
                "Color and Lighting Anomaly",
                "Color or illumination behavior inconsistent with any plausible camera or light source.",
                [
                    ("Color Over-Saturation", "Regions rendered with implausibly vivid, flat color lacking natural tonal variation."),
                    ("Lighting Inconsistency", "Illumination jumps or fluctuates with no change of light source, exposure, or scene to explain it."),
                ],
            ),
            (
                "Motion Forgery",
                "Camera-level motion that no physical rig would produce.",
                [
                    ("Camera Motion Inconsistency", "Erratic zooms, high-frequency pans, or shakes whose induced object motion contradicts a real camera path."),
                ],
            ),
        ],
    ),
    (
        "Violation of Laws",
        "Content that contradicts object permanence, physics, causality, or everyday common sense; spotting it requires reasoning about how the world behaves.",
        [
            (
                "Object Inconsistency",
                "An object's existence or identity fails to persist over time.",
                [
                    ("Abnormal Object Disappearance", "A moving object vanishes without occlusion or any plausible interaction."),
                    ("Abnormal Object Appearance", "An object materializes mid-scene with no cause or prior indication."),
                    ("Person Identity Inconsistency", "A person's face or other stable identity cues change into someone else's over time."),
                    ("General Object Identity Inconsistency", "A non-person object's color, structure, or identity drifts drastically without external cause."),
                    ("Shape Distortion", "Rigid bodies stretch, pulse, or twist in ways incompatible with rigid motion."),
                ],
            ),
            (
                "Interaction Inconsistency",
                "Physically impossible behavior where multiple objects meet.",
                [
                    ("Abnormal Rigid-Body Crossing", "Solid objects pass through each other instead of colliding or occluding."),
                    ("Abnormal Multi-Object Merging", "Two or more distinct objects fuse into one during motion."),
                    ("Abnormal Object Splitting", "A single object divides into several distinct objects without cause."),
                    ("General Interaction Anomaly", "Other impossible contact behavior: missing collisions, inconsistent contact, contradictory occlusion."),
                ],
            ),
            (
                "Unnatural Movement",
                "Motion that contradicts the kinematics of the moving body.",
                [
                    ("Unnatural Human Movement", "Human motion outside normal biomechanics, such as gliding legs with no gait cycle."),
                    ("Unnatural Animal Movement", "Animal locomotion incompatible with the species' known gait patterns."),
                    ("Unnatural General Object Movement", "Objects follow trajectories or accelerations inconsistent with real dynamics."),
                ],
            ),
            (
                "Violation of Causality Law",
                "Effects without causes, or causes without their expected effects.",
                [
                    ("Violation of Physical Laws", "Motion contradicting basic mechanics, e.g. velocity changes with no applied force or instantaneous teleports."),
                    ("Violation of General Causality Law", "Events with no observable cause, or actions whose expected consequences never appear."),
                ],
            ),
            (
                "Violation of Commonsense",
                "Structural or semantic content that conflicts with basic world knowledge.",
                [
                    ("Abnormal Human Body Structure", "Anatomically impossible bodies: extra or missing parts, impossible articulation."),
                    ("Abnormal General Object Structure", "Objects missing essential components or assembled in impossible ways."),
                    ("Text Distortion", "Scene text rendered as warped or illegible gibberish beyond ordinary degradation."),
                ],
            ),
        ],
    ),
]

# Printed sources name some nodes inconsistently; accept those spellings
# explicitly rather than guessing. Keys are normalized (lowercase, single
# spaces).
_ALIASES: dict[str, str] = {
    "color/light anomaly": "color_and_lighting_anomaly",
    "color & lighting anomaly": "color_and_lighting_anomaly",
    "move forgery": "motion_forgery",
    "violation of causality": "violation_of_causality_law",
    "violation of common sense": "violation_of_commonsense",
    "violation of physical law": "violation_of_physical_laws",
    "violation of general causality": "violation_of_general_causality_law",
    "violation of general causality violation": "violation_of_general_causality_law",
    "color over-saturation": "color_over_saturation",
}


class TaxonomyTree:
    """Immutable canonical tree; all lookups are pure."""

    def __init__(self, nodes: Iterable[TaxonomyNode]):
        self._nodes: dict[str, TaxonomyNode] = {}
        self._children: dict[str, list[str]] = {}
        for node in nodes:
            if node.code in self._nodes:
                raise ValueError(f"duplicate taxonomy code {node.code!r}")
            self._nodes[node.code] = node
            self._children.setdefault(node.code, [])
            if node.parent_code is not None:
                self._children.setdefault(node.parent_code, []).append(node.code)
        self._by_name = {self._norm(n.display_name): n.code for n in self._nodes.values()}

    @staticmethod
    def _norm(text: str) -> str:
        return " ".join(text.split()).lower()

    def node(self, code: str) -> TaxonomyNode:
        return self._nodes[code]

    def nodes(self, level: Level | None = None) -> list[TaxonomyNode]:
        ordered = list(self._nodes.values())
        if level is None:
            return ordered
        return [n for n in ordered if n.level == level]

    def children(self, code: str) -> list[TaxonomyNode]:
        return [self._nodes[c] for c in self._children[code]]

    def resolve_label(self, text: str) -> TaxonomyPath:
        """Map free-form label text to a path ending at the matched node.

        Matching is case-insensitive with whitespace collapsed; L1/L2 names
        yield partial paths. Unknown text raises UnknownLabel — never a
        silent default.
        """
        if not text or not text.strip():
            raise UnknownLabel(text)
        key = self._norm(text)
        code = self._by_name.get(key) or _ALIASES.get(key)
        if code is None:
            raise UnknownLabel(text)
        chain = self._ancestry(code)
        return TaxonomyPath(*chain + [None] * (3 - len(chain)))

    def _ancestry(self, code: str) -> list[str]:
        chain = []
        cur: str | None = code
        while cur is not None:
            chain.append(cur)
            cur = self._nodes[cur].parent_code
        return chain[::-1]

    def validate_path(self, path: TaxonomyPath) -> None:
        """Raise InvalidPath unless (l1, l2, l3) is an ancestor chain."""
        if path.l1 not in self._nodes or self._nodes[path.l1].level != Level.L1:
            raise InvalidPath(f"{path.l1!r} is not an L1 code")
        if path.l3 is not None and path.l2 is None:
            raise InvalidPath("l3 present without l2")
        if path.l2 is not None:
            n2 = self._nodes.get(path.l2)
            if n2 is None or n2.level != Level.L2 or n2.parent_code != path.l1:
                raise InvalidPath(f"{path.l2!r} is not an L2 child of {path.l1!r}")
        if path.l3 is not None:
            n3 = self._nodes.get(path.l3)
            if n3 is None or n3.level != Level.L3 or n3.parent_code != path.l2:
                raise InvalidPath(f"{path.l3!r} is not an L3 child of {path.l2!r}")

    def path_for(self, code: str) -> TaxonomyPath:
        if code not in self._nodes:
            raise UnknownLabel(code)
        chain = self._ancestry(code)
        return TaxonomyPath(*chain + [None] * (3 - len(chain)))

    def distribution_report(self, annotations: Iterable[TaxonomyPath]) -> dict[str, float]:
        """Per-node ratio of annotations falling at or below each node.

        With full-L3 input, ratios at each level sum to 1; partial paths
        contribute only to the levels they reach. Empty input yields zeros.
        """
        counts = {code: 0 for code in self._nodes}
        total = 0
        for path in annotations:
            self.validate_path(path)
            total += 1
            for code in (path.l1, path.l2, path.l3):
                if code is not None:
                    counts[code] += 1
        if total == 0:
            return {code: 0.0 for code in self._nodes}
        return {code: counts[code] / total for code in self._nodes}

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "code": n.code,
                    "name": n.display_name,
                    "level": n.level.value,
                    "parent": n.parent_code,
                    "definition": n.definition,
                }
                for n in self._nodes.values()
            ]
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)


def _build_tree() -> TaxonomyTree:
    nodes: list[TaxonomyNode] = []
    for l1_name, l1_def, l2_list in _TREE_SPEC:
        l1_code = _slug(l1_name)
        nodes.append(TaxonomyNode(l1_code, l1_name, Level.L1, None, l1_def))
        for l2_name, l2_def, l3_list in l2_list:
            l2_code = _slug(l2_name)
            nodes.append(TaxonomyNode(l2_code, l2_name, Level.L2, l1_code, l2_def))
            for l3_name, l3_def in l3_list:
                nodes.append(TaxonomyNode(_slug(l3_name), l3_name, Level.L3, l2_code, l3_def))
    return TaxonomyTree(nodes)


_CANONICAL = _build_tree()


def canonical_taxonomy() -> TaxonomyTree:
    """The immutable canonical tree (2 L1 / 8 L2 / 23 L3); idempotent."""
    return _CANONICAL


def resolve_label(text: str) -> TaxonomyPath:
    return _CANONICAL.resolve_label(text)


def distribution_report(annotations: Iterable[TaxonomyPath]) -> dict[str, float]:
    return _CANONICAL.distribution_report(annotations)


def label_names(level: Level | None = None) -> list[str]:
    return [n.display_name for n in _CANONICAL.nodes(level)]


def distribution_table(report: Mapping[str, float]) -> str:
    """Render a distribution report as an indented plain-text table."""
    tree = _CANONICAL
    lines = []
    for n1 in tree.nodes(Level.L1):
        lines.append(f"{n1.display_name:<46s} {report[n1.code] * 100:6.1f}%")
        for n2 in tree.children(n1.code):
            lines.append(f"  {n2.display_name:<44s} {report[n2.code] * 100:6.1f}%")
            for n3 in tree.children(n2.code):
                lines.append(f"    {n3.display_name:<42s} {report[n3.code] * 100:6.1f}%")
    return "\n".join(lines)
