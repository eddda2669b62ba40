# Copyright 2026 The vla Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Variational matrix multiplication, linear solves and dynamics.

Matrices are dense complex numpy arrays; sizes that are not a power of two
are zero-padded. Results are the same JSON reports the ``vla`` CLI writes,
decoded to dicts, plus the prepared statevector.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence

import numpy as np

from ._core import DegenerateProblem, StepFailure, load_matrix, pauli_terms, random_problem
from . import _core

__all__ = [
    "DegenerateProblem",
    "StepFailure",
    "bench",
    "evolve",
    "load_matrix",
    "multiply",
    "pauli_terms",
    "random_problem",
    "solve",
]


def _run(task, matrix, *, v0=None, depth=None, max_depth=8, optimizer="", mode="exact", shots=1000, seed=0,
         fidelity_min=0.99, oracle=False, allow_non_hermitian=False, max_steps=1000, learning_rate=0.1):
    m = np.asarray(matrix, dtype=np.complex128)
    text, state = _core._run(task, m, v0, depth, max_depth, optimizer or "", mode, shots, seed, fidelity_min,
                             oracle, allow_non_hermitian, max_steps, learning_rate)
    return json.loads(text), np.asarray(state)


def multiply(matrix, **kwargs):
    """Prepare M|v0>/||M|v0>||. Returns (report, state)."""
    return _run("multiply", matrix, **kwargs)


def solve(matrix, **kwargs):
    """Prepare M^-1|v0>/||M^-1|v0>||. Returns (report, state).

    Keyword arguments mirror the CLI: v0 (circuit JSON path or None for |0..0>),
    depth (None escalates), optimizer ("vqe", "ite", "morph"), mode, shots,
    seed, fidelity_min, oracle, allow_non_hermitian.
    """
    return _run("solve", matrix, **kwargs)


def evolve(hamiltonian, time: float, dt: float, *, imaginary: bool = False, depth: int = 2,
           theta0: Optional[Sequence[float]] = None, seed: int = 0, relative_tolerance: float = 1e-3):
    """Variational real- or imaginary-time evolution from the ansatz state at theta0.

    theta0 defaults to uniform random angles drawn from ``seed``. Returns
    (summary, states) with one state per time step including t = 0.
    """
    h = np.asarray(hamiltonian, dtype=np.complex128)
    th = None if theta0 is None else [float(t) for t in theta0]
    text, states = _core._evolve(h, time, dt, imaginary, depth, th, seed, relative_tolerance)
    return json.loads(text), [np.asarray(s) for s in states]


def bench(n: Sequence[int], kappa: Sequence[float], depths: Sequence[int], trials: int, seed: int,
          threads: int = 0) -> str:
    """Success-probability sweep; returns the CSV without timing columns."""
    return _core._bench(list(n), list(kappa), list(depths), trials, seed, threads)
