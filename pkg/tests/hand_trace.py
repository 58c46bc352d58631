"""Scalar step-by-step evaluation of a 3-tick episode (delta = 1, r = 1).

Written with plain floats and ``math`` only, so it shares no code with the
package. Used as the reference for the tick loop.
"""

import math

import numpy as np

W, W_IN, GAMMA = 0.5, 1.0, 0.8
X0 = 0.2
REF = [0.3, 0.5, 0.4]
KP, KD, TAU = 0.1, 0.01, 0.05
ALPHA, LAM = 1.0, 0.99
SIGMA, NOISE_SEED = 0.05, 123


def noise_draws(n):
    rng = np.random.default_rng(NOISE_SEED)
    return [float(rng.normal(0.0, SIGMA)) for _ in range(n)]


def hand_trace():
    noise = noise_draws(3)
    ref_pad = REF + [REF[-1]]
    x_prev_tick = None          # x_{k-1}
    u_bar_prev, u_ff_prev, e_prev = 0.0, 0.0, 0.0
    w = [0.0, 0.0]
    P = [[1.0 / ALPHA, 0.0], [0.0, 1.0 / ALPHA]]
    x = X0
    y = 0.0
    frames = []
    for k in range(3):
        y_meas = y + noise[k]
        learner_error = math.nan
        if k >= 1:
            phi = [x_prev_tick, y_meas]
            Pphi = [P[0][0] * phi[0] + P[0][1] * phi[1], P[1][0] * phi[0] + P[1][1] * phi[1]]
            denom = LAM + phi[0] * Pphi[0] + phi[1] * Pphi[1]
            P = [[(P[i][j] - Pphi[i] * Pphi[j] / denom) / LAM for j in range(2)] for i in range(2)]
            P = [[0.5 * (P[i][j] + P[j][i]) for j in range(2)] for i in range(2)]
            err = w[0] * phi[0] + w[1] * phi[1] - u_bar_prev
            Pn = [P[0][0] * phi[0] + P[0][1] * phi[1], P[1][0] * phi[0] + P[1][1] * phi[1]]
            w = [w[0] - err * Pn[0], w[1] - err * Pn[1]]
            learner_error = err
        x = (1 - GAMMA) * x + GAMMA * math.tanh(W * x + W_IN * ref_pad[k + 1])
        u_ff = w[0] * x + w[1] * ref_pad[k + 1]
        e = REF[k] - y_meas
        u_fb = KP * e + KD * (e - e_prev) / TAU
        u = u_bar_prev + u_ff - u_ff_prev + u_fb
        u_bar = u
        frames.append(dict(k=k, y_ref=REF[k], y_true=y, y_measured=y_meas, u_ff=u_ff, u_fb=u_fb,
                           u_raw=u, u_applied=u_bar, err_feedback=e, state=x, learner_error=learner_error))
        y = y / (1 + y * y) + u_bar ** 3
        x_prev_tick = x
        u_bar_prev, u_ff_prev, e_prev = u_bar, u_ff, e
    return frames


def package_trace():
    from reservoir_control.controller import ControlLoop, PdGains, SaturationMode
    from reservoir_control.learner import rls_init
    from reservoir_control.plants import BenchmarkPlant, NoiseModel
    from reservoir_control.reservoir import EsnParams, EsnReservoir
    from reservoir_control.signals import ReferenceSignal

    params = EsnParams(np.array([[W]]), np.array([W_IN]), GAMMA, abs(W), 1.0)
    loop = ControlLoop(
        reference=ReferenceSignal(REF, TAU), plant=BenchmarkPlant(),
        reservoir=EsnReservoir(params, washout_steps=0, initial_state=np.array([X0])),
        learner=rls_init(1, 1, ALPHA, LAM), gains=PdGains(KP, KD, TAU), saturation=SaturationMode.none(),
        noise=NoiseModel(SIGMA, NOISE_SEED), delta=1)
    return [loop.tick() for _ in range(3)]


FIELDS = ("y_ref", "y_true", "y_measured", "u_ff", "u_fb", "u_raw", "u_applied", "err_feedback",
          "learner_error")


def max_discrepancy():
    worst = 0.0
    for ours, ref in zip(package_trace(), hand_trace()):
        assert ours.k == ref["k"]
        for name in FIELDS:
            a, b = getattr(ours, name), ref[name]
            if math.isnan(b):
                assert math.isnan(a), name
                continue
            worst = max(worst, abs(a - b))
        worst = max(worst, abs(float(ours.state[0]) - ref["state"]))
    return worst
