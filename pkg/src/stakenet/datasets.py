"""Bundled example networks shaped after the three case projects."""

from __future__ import annotations

import json

from .ingest import network_from_dict
from .network import StakeholderNetwork
from .synthesis import GenericModel, _data_text, generic_model_from_dict

PROJECTS = ("project1", "project2", "project3")


def load_project(name: str) -> StakeholderNetwork:
    """One of ``project1`` (13 roles), ``project2`` (22 roles) or ``project3`` (23 roles)."""
    if name not in PROJECTS:
        raise ValueError(f"unknown bundled project {name!r}; choose from {', '.join(PROJECTS)}")
    return network_from_dict(json.loads(_data_text(f"{name}.json")))


def load_generic_model() -> GenericModel:
    return generic_model_from_dict(json.loads(_data_text("generic_model.json")))
