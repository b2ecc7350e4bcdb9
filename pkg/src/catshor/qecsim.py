"""Monte-Carlo sampling of the distance-d repetition code under circuit-level
phase-flip noise, with a matching decoder.

The code lays d data qubits on a line with d-1 ancillas between them; each
cycle runs five steps (ancilla preparation, first CNOT round, idle, second
CNOT round, ancilla measurement).  Only Z errors are tracked: they propagate
from the target onto the control of a CNOT and are invisible to everything
else, so exact Pauli-frame bookkeeping is two bit vectors.
"""

import itertools
import math

import attrs
import numpy as np

from .errormodel import physical_errors

# matching beyond this many detection events falls back to a greedy pairing
EXACT_MATCH_LIMIT = 12


@attrs.frozen
class CnotNoise:
    p_z1: float
    p_z2: float
    p_z1z2: float


@attrs.frozen
class NoiseModel:
    """Per-location Z probabilities for one code cycle."""

    p_prep: float
    p_meas: float
    p_idle: float
    cnot: CnotNoise

    @classmethod
    def from_params(cls, params):
        cx = physical_errors(params, "cnot_fast")
        return cls(
            p_prep=physical_errors(params, "prep")["z"],
            p_meas=physical_errors(params, "meas")["z"],
            p_idle=params.alpha_sq * params.kappa_ratio,
            cnot=CnotNoise(p_z1=cx["z1"], p_z2=cx["z2"], p_z1z2=cx["z1z2"]),
        )

    @classmethod
    def noiseless(cls):
        return cls(0.0, 0.0, 0.0, CnotNoise(0.0, 0.0, 0.0))


@attrs.frozen
class SyndromeHistory:
    """(d-1) x (d+1) stabilizer outcomes: d noisy rounds, one perfect round."""

    outcomes: tuple

    @property
    def rounds(self):
        return len(self.outcomes[0]) if self.outcomes else 0


def _cnot_draws(rng, p, shape):
    """0 none, 1 Z on control, 2 Z on target, 3 Z on both."""
    u = rng.random(shape)
    out = np.zeros(shape, dtype=np.uint8)
    out[u < p.p_z1 + p.p_z2 + p.p_z1z2] = 3
    out[u < p.p_z1 + p.p_z2] = 2
    out[u < p.p_z1] = 1
    return out


def sample_cycle_history(d, noise, rng_seed, injections=()):
    """Run d noisy cycles plus one perfect round.

    ``injections`` is an iterable of (cycle, data_index) pairs: a Z is
    injected on that data qubit right before the given cycle (test hook).
    Returns (SyndromeHistory, final data-qubit Z frame as a tuple of bits).
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"code distance must be odd and >= 3, got {d}")
    if not isinstance(rng_seed, np.random.SeedSequence):
        rng_seed = np.random.SeedSequence(rng_seed)
    rng = np.random.default_rng(rng_seed)
    n_stab = d - 1
    data = np.zeros(d, dtype=np.uint8)
    outcomes = np.zeros((n_stab, d + 1), dtype=np.uint8)

    prep = rng.random((d, n_stab)) < noise.p_prep
    meas = rng.random((d, n_stab)) < noise.p_meas
    idle = rng.random((d, d)) < noise.p_idle
    cx_a = _cnot_draws(rng, noise.cnot, (d, n_stab))
    cx_b = _cnot_draws(rng, noise.cnot, (d, n_stab))

    for cyc in range(d):
        for when, qubit in injections:
            if when == cyc:
                data[qubit] ^= 1
        anc = prep[cyc].astype(np.uint8).copy()
        # first CNOT round: ancilla i (control) with data i (target)
        anc ^= data[:n_stab]
        draw = cx_a[cyc]
        anc ^= ((draw == 1) | (draw == 3)).astype(np.uint8)
        data[:n_stab] ^= ((draw == 2) | (draw == 3)).astype(np.uint8)
        # idle slot hits every data qubit once
        data ^= idle[cyc].astype(np.uint8)
        # second CNOT round: ancilla i with data i+1
        anc ^= data[1:]
        draw = cx_b[cyc]
        anc ^= ((draw == 1) | (draw == 3)).astype(np.uint8)
        data[1:] ^= ((draw == 2) | (draw == 3)).astype(np.uint8)
        outcomes[:, cyc] = anc ^ meas[cyc].astype(np.uint8)
    # final perfect round reads the residual frame directly
    outcomes[:, d] = data[:n_stab] ^ data[1:]
    history = SyndromeHistory(tuple(tuple(int(v) for v in row) for row in outcomes))
    return history, tuple(int(v) for v in data)


def detection_events(history):
    """XOR of consecutive rounds per stabilizer; round -1 reads all zero."""
    events = []
    for s, row in enumerate(history.outcomes):
        prev = 0
        for c, v in enumerate(row):
            if v ^ prev:
                events.append((s, c))
            prev = v
    return events


def _pair_weight(a, b):
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _boundary_weight(node, d):
    s = node[0]
    return min(s + 1, d - 1 - s)


def _boundary_path(node, d):
    s = node[0]
    if s + 1 <= d - 1 - s:
        return range(0, s + 1)
    return range(s + 1, d)


def _exact_match(defects, d):
    """Minimum-weight pairing, each defect matched to another or a boundary."""

    best = [math.inf, None]

    def recurse(remaining, weight, pairs):
        if weight >= best[0]:
            return
        if not remaining:
            best[0] = weight
            best[1] = list(pairs)
            return
        head = remaining[0]
        rest = remaining[1:]
        for j, other in enumerate(rest):
            recurse(
                rest[:j] + rest[j + 1 :],
                weight + _pair_weight(head, other),
                pairs + [(head, other)],
            )
        recurse(rest, weight + _boundary_weight(head, d), pairs + [(head, None)])

    recurse(tuple(defects), 0, [])
    return best[1]


_BOUNDARY = 10**9  # sorts after any defect index in greedy tie-breaks


def _greedy_match(defects, d):
    """Repeatedly take the globally cheapest option; deterministic order."""
    left = list(defects)
    pairs = []
    while left:
        best = None
        for i, j in itertools.combinations(range(len(left)), 2):
            cand = (_pair_weight(left[i], left[j]), i, j)
            if best is None or cand < best:
                best = cand
        for i in range(len(left)):
            cand = (_boundary_weight(left[i], d), i, _BOUNDARY)
            if best is None or cand < best:
                best = cand
        _, i, j = best
        if j == _BOUNDARY:
            pairs.append((left[i], None))
            del left[i]
        else:
            pairs.append((left[i], left[j]))
            del left[j], left[i]
    return pairs


def decode(history, d):
    """Correction (set of data-qubit indices to flip) from a syndrome history."""
    defects = detection_events(history)
    if not defects:
        return set()
    if len(defects) <= EXACT_MATCH_LIMIT:
        pairs = _exact_match(defects, d)
    else:
        pairs = _greedy_match(defects, d)
    correction = set()
    for a, b in pairs:
        if b is None:
            correction ^= set(_boundary_path(a, d))
        else:
            lo, hi = sorted((a[0], b[0]))
            correction ^= set(range(lo + 1, hi + 1))
    return correction


def trial_seed(master_seed, trial_index):
    """Per-trial seeds depend only on (master_seed, index), never on workers."""
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index,))


def run_trial(d, noise, seed):
    """True if the trial ends in a logical Z flip after correction."""
    history, frame = sample_cycle_history(d, noise, seed)
    correction = decode(history, d)
    residual = [bit ^ (i in correction) for i, bit in enumerate(frame)]
    # zero residual syndrome means the residual is empty or the full-line
    # logical operator; either way one bit decides
    assert all(residual[i] == residual[i + 1] for i in range(d - 1)), (
        "correction left a nonzero syndrome"
    )
    return bool(residual[0])


def count_flips(d, noise, master_seed, start, stop):
    """Logical flips over trial indices [start, stop); worker-partition safe."""
    flips = 0
    for t in range(start, stop):
        if run_trial(d, noise, trial_seed(master_seed, t)):
            flips += 1
    return flips


def logical_z_rate(d, params, trials, master_seed=0):
    """Per-cycle logical Z rate estimate with its binomial standard error."""
    if trials <= 0:
        raise ValueError(f"trials must be positive, got {trials}")
    noise = NoiseModel.from_params(params)
    flips = count_flips(d, noise, master_seed, 0, trials)
    p_run = flips / trials
    stderr_run = math.sqrt(max(p_run * (1.0 - p_run), 0.0) / trials)
    return p_run / d, stderr_run / d


def logical_z_rate_record(d, params, trials, master_seed=0, flips=None):
    """JSON-ready record for one sampling run."""
    if flips is None:
        rate, err = logical_z_rate(d, params, trials, master_seed)
    else:
        p_run = flips / trials
        rate = p_run / d
        err = math.sqrt(max(p_run * (1.0 - p_run), 0.0) / trials) / d
    return {
        "schema": "catshor/qec_sample/v1",
        "d": d,
        "alpha_sq": params.alpha_sq,
        "kappa_ratio": params.kappa_ratio,
        "trials": trials,
        "seed": master_seed,
        "p_zl_per_cycle": rate,
        "stderr": err,
    }
