"""Per-transaction rewards from vitality, age and fee."""
import numpy as np


def _softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - z.max())
    return e / e.sum()


def compute_rewards(vitality: np.ndarray, age: np.ndarray, fee: np.ndarray) -> np.ndarray:
    """Reward r_j = (1 + ṽ_j e^{-f_j})^{-1/ã_j}, each value in (0, 1).

    ṽ is a softmax of -v/‖v‖ and ã a softmax of a/‖a‖ over the batch, with
    Euclidean norms. Higher vitality, age and fee all raise the reward.
    """
    v = np.asarray(vitality, dtype=float)
    a = np.asarray(age, dtype=float)
    f = np.asarray(fee, dtype=float)
    if not v.shape == a.shape == f.shape or v.ndim != 1:
        raise ValueError("vitality, age and fee must be equal-length vectors")
    if len(v) == 0:
        return np.zeros(0)
    if np.any(v < 1) or np.any(a < 1):
        raise ValueError("vitality and age must be at least 1")
    if np.any(f < 0):
        raise ValueError("fees must be non-negative")

    v_soft = _softmax(-v / np.linalg.norm(v))
    a_soft = _softmax(a / np.linalg.norm(a))
    return np.exp(-np.log1p(v_soft * np.exp(-f)) / a_soft)
