"""Compiled shooting kernel.

Integrates ``u' = v/p``, ``v' = (q - a w) u`` from ``u = 0, v = 1`` with the
Dormand-Prince 5(4) pair and stops at the first sign change of ``u``.  The
crossing is located on the 4th-order continuous extension of the step.

Segment ``j`` of the table covers ``[seg[j], seg[j+1]]``; rows of P, Q, W are
polynomials in ``t - seg[j]``.  Steps never straddle a segment boundary.  The
state is rescaled whenever it leaves [1e-4, 1e4]; zeros of a linear
homogeneous equation are unaffected by this.
"""

import math

import numba as nb
import numpy as np

# status codes
BEYOND = 0
CROSSED = 1
UNDERFLOW = -1
MAX_STEPS = -2

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1 / 5, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3 / 40, 9 / 40, 0.0, 0.0, 0.0, 0.0],
        [44 / 45, -56 / 15, 32 / 9, 0.0, 0.0, 0.0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0.0, 0.0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0.0],
        [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
    ]
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = np.array([-71 / 57600, 0.0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40])
# dense output: y(theta) = y0 + h * sum_r (K^T P)[r] theta^(r+1)
_P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0


@nb.njit(cache=True, nogil=True)
def _poly(c, x):
    r = 0.0
    for i in range(c.shape[0] - 1, -1, -1):
        r = r * x + c[i]
    return r


@nb.njit(cache=True, nogil=True)
def _dense(u0, h, ku, theta):
    # u(theta) on the current step
    acc = 0.0
    for r in range(3, -1, -1):
        cr = 0.0
        for i in range(7):
            cr += ku[i] * _P[i, r]
        acc = (acc + cr) * theta
    return u0 + h * acc


@nb.njit(cache=True, nogil=True)
def shoot(seg, P, Q, W, a, s, stop, direction, rtol, atol, etol, h0, max_steps, trace):
    """Shoot from ``s`` towards ``stop`` (``direction`` = +1 or -1).

    Returns ``(status, t_cross, u_ratio, steps, n_trace)``; ``u_ratio`` is
    ``|u(t_cross)| / max|u|`` over the shot.  When ``trace`` has rows, accepted
    states are written there as ``(t, u, v, log_scale)``.
    """
    nseg = P.shape[0]
    cap = trace.shape[0]
    ntr = 0
    # locate the segment
    if direction > 0:
        j = 0
        while j < nseg - 1 and seg[j + 1] <= s:
            j += 1
    else:
        j = nseg - 1
        while j > 0 and seg[j] >= s:
            j -= 1
    t = s
    u = 0.0
    v = 1.0
    logscale = 0.0
    log_umax = -np.inf
    h = direction * abs(h0)
    first = True
    steps = 0
    ku = np.empty(7)
    kv = np.empty(7)
    fsal = False
    if cap > 0:
        trace[0, 0] = t
        trace[0, 1] = u
        trace[0, 2] = v
        trace[0, 3] = 0.0
        ntr = 1

    while True:
        if direction > 0:
            end = seg[j + 1] if j < nseg - 1 else stop
            if end > stop:
                end = stop
        else:
            end = seg[j] if j > 0 else stop
            if end < stop:
                end = stop
        origin = seg[j]
        remaining = end - t
        if remaining * direction <= 1e-15 * max(1.0, abs(t)):
            t = end
            if end == stop:
                return BEYOND, np.inf, 0.0, steps, ntr
            j += direction
            fsal = False
            continue

        last = False
        if abs(h) >= abs(remaining):
            h = remaining
            last = True

        x0 = t - origin
        if not fsal:
            pp = _poly(P[j], x0)
            ku[0] = v / pp
            kv[0] = (_poly(Q[j], x0) - a * _poly(W[j], x0)) * u
        for i in range(1, 7):
            ui = u
            vi = v
            for l in range(i):
                ui += h * _A[i, l] * ku[l]
                vi += h * _A[i, l] * kv[l]
            xi = x0 + _C[i] * h
            ku[i] = vi / _poly(P[j], xi)
            kv[i] = (_poly(Q[j], xi) - a * _poly(W[j], xi)) * ui
        un = u
        vn = v
        eu = 0.0
        ev = 0.0
        for i in range(7):
            un += h * _B[i] * ku[i]
            vn += h * _B[i] * kv[i]
            eu += h * _E[i] * ku[i]
            ev += h * _E[i] * kv[i]
        su = atol + rtol * max(abs(u), abs(un))
        sv = atol + rtol * max(abs(v), abs(vn))
        err = math.sqrt(0.5 * ((eu / su) ** 2 + (ev / sv) ** 2))
        steps += 1
        if steps > max_steps:
            return MAX_STEPS, t, 0.0, steps, ntr

        if err <= 1.0:
            if un * direction <= 0.0:
                if first:
                    # the very first step may not contain the next zero
                    h *= 0.25
                    fsal = True
                    continue
                # locate the zero on the dense output, Illinois iteration
                tha = 0.0
                fa = u * direction
                thb = 1.0
                fb = un * direction
                side = 0
                th = 1.0
                for _ in range(100):
                    if abs((thb - tha) * h) <= etol:
                        break
                    th = (tha * fb - thb * fa) / (fb - fa)
                    if not (tha < th < thb):
                        th = 0.5 * (tha + thb)
                    fth = _dense(u, h, ku, th) * direction
                    if fth > 0.0:
                        tha = th
                        fa = fth
                        if side == -1:
                            fb *= 0.5
                        side = -1
                    elif fth < 0.0:
                        thb = th
                        fb = fth
                        if side == 1:
                            fa *= 0.5
                        side = 1
                    else:
                        tha = th
                        thb = th
                        break
                th = 0.5 * (tha + thb)
                tc = t + th * h
                uc = abs(_dense(u, h, ku, th))
                log_umax = max(log_umax, math.log(max(abs(u), 1e-300)) + logscale)
                ratio = math.exp(math.log(max(uc, 1e-300)) + logscale - log_umax) if uc > 0 else 0.0
                if cap > ntr:
                    trace[ntr, 0] = tc
                    trace[ntr, 1] = _dense(u, h, ku, th)
                    trace[ntr, 2] = vn
                    trace[ntr, 3] = logscale
                    ntr += 1
                return CROSSED, tc, ratio, steps, ntr

            t = end if last else t + h
            u = un
            v = vn
            first = False
            ku[0] = ku[6]
            kv[0] = kv[6]
            fsal = True
            au = abs(u)
            if au > 0.0:
                lu = math.log(au) + logscale
                if lu > log_umax:
                    log_umax = lu
            norm = abs(u) + abs(v)
            if norm > 1e4 or norm < 1e-4:
                u /= norm
                v /= norm
                ku[0] /= norm
                kv[0] /= norm
                logscale += math.log(norm)
            if cap > ntr:
                trace[ntr, 0] = t
                trace[ntr, 1] = u
                trace[ntr, 2] = v
                trace[ntr, 3] = logscale
                ntr += 1
            if err == 0.0:
                fac = MAX_FACTOR
            else:
                fac = min(MAX_FACTOR, SAFETY * err ** -0.2)
            if not last:
                h *= fac
            else:
                # keep the step proposed before clipping to the segment end
                h = h * fac if abs(h * fac) > abs(h) else h
        else:
            fsal = True
            h *= max(MIN_FACTOR, SAFETY * err ** -0.2)
        if abs(h) < 1e-14 * max(1.0, abs(t)):
            return UNDERFLOW, t, 0.0, steps, ntr
