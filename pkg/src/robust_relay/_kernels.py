"""Compiled numeric core shared by the power-allocation and rate solvers.

Everything in here operates on plain float64 arrays (spectra sorted in
descending order, power vectors, budgets) so it can be jitted.  The public
modules wrap these kernels with validated dataclasses.
"""

import numpy as np
from numba import njit

# Stopping rules for the iterative pieces.  The alternation tolerance and the
# relay-power bisection width are the knobs that matter for solution quality;
# the inner bisections are run essentially to machine precision because they
# are cheap.
ALTERNATION_TOL = 1e-7
ALTERNATION_GAP_TOL = 1e-9
ALTERNATION_PLAIN_SWEEPS = 25
ALTERNATION_MAX_SWEEPS = 500
BISECTION_EPS_REL = 1e-6
BISECTION_MAX_ITERS = 60


@njit(cache=True)
def water_fill(gains, budget):
    """Classical water-filling over descending channel gains.

    Maximizes sum(log2(1 + gains[i] * p[i])) subject to sum(p) <= budget.
    Returns (powers, water_level, active_count).  The water level is found
    with the sorted-prefix closed form: try k active channels for
    k = n .. 1 and keep the largest k whose level clears channel k-1.
    A budget of zero or all-zero gains yields the all-zero allocation with
    water level 0.
    """
    n = gains.shape[0]
    powers = np.zeros(n)
    m = 0
    for i in range(n):
        if gains[i] > 0.0:
            m += 1
    if m == 0 or budget <= 0.0:
        return powers, 0.0, 0

    csum = 0.0
    tau = 0.0
    active = 0
    for k in range(1, m + 1):
        csum += 1.0 / gains[k - 1]
        t = (budget + csum) / k
        if t > 1.0 / gains[k - 1]:
            tau = t
            active = k
    for i in range(active):
        powers[i] = tau - 1.0 / gains[i]
    return powers, tau, active


@njit(cache=True)
def _block_root(w, c_sum, i0, i1, mu):
    """Solve sum_{i0<=i<i1} w[i]/(1 + w[i]*u) = mu * c_sum for u >= 0.

    The left side is convex and decreasing in u, so Newton from u = 0
    approaches the root monotonically from the left.
    """
    rhs = mu * c_sum
    lhs0 = 0.0
    for i in range(i0, i1):
        lhs0 += w[i]
    if lhs0 <= rhs:
        return 0.0
    u = 0.0
    for _ in range(100):
        h = -rhs
        hp = 0.0
        for i in range(i0, i1):
            d = 1.0 + w[i] * u
            h += w[i] / d
            hp -= (w[i] / d) * (w[i] / d)
        if hp == 0.0:
            break
        step = h / hp
        u_new = u - step
        if u_new < u:
            # Newton from the left never overshoots; guard anyway.
            u_new = u
        if u_new - u <= 1e-15 * (1.0 + u):
            u = u_new
            break
        u = u_new
    return u


@njit(cache=True)
def _isotonic_products(w, c, mu, u_out, blk_start, blk_val):
    """Pool-adjacent-violators pass for fixed multiplier mu.

    Minimizes sum_i (mu*c[i]*u[i] - ln(1+w[i]*u[i])) subject to
    u[0] >= u[1] >= ... >= 0.  Writes the solution into u_out and returns
    the budget consumption sum(c[i]*u[i]).
    """
    n = w.shape[0]
    nb = 0
    for i in range(n):
        ui = 1.0 / (mu * c[i]) - 1.0 / w[i]
        if ui < 0.0:
            ui = 0.0
        blk_start[nb] = i
        blk_val[nb] = ui
        nb += 1
        while nb > 1 and blk_val[nb - 1] > blk_val[nb - 2]:
            i0 = blk_start[nb - 2]
            c_sum = 0.0
            for j in range(i0, i + 1):
                c_sum += c[j]
            u = _block_root(w, c_sum, i0, i + 1, mu)
            nb -= 1
            blk_val[nb - 1] = u
    spent = 0.0
    for b in range(nb):
        i0 = blk_start[b]
        i1 = blk_start[b + 1] if b + 1 < nb else n
        for i in range(i0, i1):
            u_out[i] = blk_val[b]
            spent += c[i] * blk_val[b]
    return spent


@njit(cache=True)
def capped_water_fill(eff_gains, raw_gains, budget):
    """Water-filling under descending product caps.

    Maximizes sum(log2(1 + eff_gains[i] * p[i])) subject to
    sum(p) <= budget and raw_gains[i]*p[i] >= raw_gains[i+1]*p[i+1] for
    all i.  raw_gains must be sorted descending; eff_gains[i] > 0 exactly
    where raw_gains[i] > 0.

    Returns (powers, water_level, active_count).  The water level reported
    is the budget-multiplier level 1/mu; channels whose cap binds sit below
    it, pooled channels share a common product.
    """
    n = raw_gains.shape[0]
    powers = np.zeros(n)
    r = 0
    for i in range(n):
        if raw_gains[i] > 0.0:
            r += 1
    if r == 0 or budget <= 0.0:
        return powers, 0.0, 0

    # The unconstrained allocation is optimal whenever it already satisfies
    # the caps (it always does when the effective gains keep the raw order).
    # Interference can scramble that order, so water-fill on the sorted
    # effective gains and map the powers back before checking the caps.
    order = np.argsort(-eff_gains[:r], kind="mergesort")
    sorted_eff = np.empty(r)
    for i in range(r):
        sorted_eff[i] = eff_gains[order[i]]
    wf_sorted, tau, active = water_fill(sorted_eff, budget)
    wf_powers = np.empty(r)
    for i in range(r):
        wf_powers[order[i]] = wf_sorted[i]
    ok = True
    for i in range(r - 1):
        if raw_gains[i] * wf_powers[i] < raw_gains[i + 1] * wf_powers[i + 1] - 1e-15:
            ok = False
            break
    if ok:
        for i in range(r):
            powers[i] = wf_powers[i]
        return powers, tau, active

    # Otherwise solve exactly in product space u[i] = raw_gains[i]*p[i]:
    # maximize sum(ln(1 + w[i]*u[i])) with w = eff/raw, budget weights
    # c = 1/raw, under the chain u[0] >= u[1] >= ... >= 0.  The budget
    # multiplier mu is bisected on the monotone map mu -> sum(c*u(mu)).
    w = np.empty(r)
    c = np.empty(r)
    for i in range(r):
        w[i] = eff_gains[i] / raw_gains[i]
        c[i] = 1.0 / raw_gains[i]

    u = np.empty(r)
    blk_start = np.empty(r, dtype=np.int64)
    blk_val = np.empty(r)

    mu_hi = eff_gains[0]
    for i in range(1, r):
        if eff_gains[i] > mu_hi:
            mu_hi = eff_gains[i]
    mu_lo = mu_hi
    for _ in range(2000):
        spent = _isotonic_products(w, c, mu_lo, u, blk_start, blk_val)
        if spent >= budget:
            break
        mu_lo *= 0.5

    for _ in range(200):
        if mu_hi - mu_lo <= 1e-15 * mu_hi:
            break
        mu = 0.5 * (mu_lo + mu_hi)
        spent = _isotonic_products(w, c, mu, u, blk_start, blk_val)
        if spent > budget:
            mu_lo = mu
        else:
            mu_hi = mu
    mu = 0.5 * (mu_lo + mu_hi)
    spent = _isotonic_products(w, c, mu, u, blk_start, blk_val)
    if spent > 0.0:
        # Absorb the residual bisection gap; uniform scaling of the products
        # preserves both the chain constraints and non-negativity.
        scale = budget / spent
        for i in range(r):
            u[i] *= scale

    active = 0
    for i in range(r):
        powers[i] = u[i] * c[i]
        if powers[i] > 0.0:
            active += 1
    return powers, 1.0 / mu, active


@njit(cache=True)
def worst_case_rsi(products, relay_powers, bound):
    """Interference spectrum minimizing the source-relay rate on a budget.

    products[i] = raw_gain[i] * source_power[i]; relay_powers couples the
    interference to each stream.  Allocates sigma2 >= 0 with
    sum(sigma2) = bound so as to minimize
    sum(log2(1 + products[i] / (1 + relay_powers[i]*sigma2[i]))), using the
    closed-form stationarity solution per stream and bisecting the
    multiplier lam on the monotone map lam -> sum(sigma2(lam)).

    Streams with zero product or zero relay power get sigma2 = 0 (mass
    there cannot affect the objective).  Returns (sigma2, lam, vacuous);
    vacuous is True when bound > 0 but no stream is attackable.
    """
    n = products.shape[0]
    sigma2 = np.zeros(n)
    n_active = 0
    for i in range(n):
        if products[i] > 0.0 and relay_powers[i] > 0.0:
            n_active += 1
    if bound <= 0.0 or n_active == 0:
        return sigma2, 0.0, bound > 0.0

    lam_hi = 1.0
    for _ in range(400):
        if _rsi_total(products, relay_powers, lam_hi) <= bound:
            break
        lam_hi *= 2.0
    lam_lo = 1e-12 if 1e-12 < lam_hi else lam_hi * 0.5
    for _ in range(800):
        if _rsi_total(products, relay_powers, lam_lo) >= bound:
            break
        if lam_lo < 1e-250:
            break
        lam_lo *= 0.5

    tol = 1e-10 * max(bound, 1.0)
    lam = lam_lo
    for _ in range(300):
        lam = 0.5 * (lam_lo + lam_hi)
        total = _rsi_total(products, relay_powers, lam)
        if abs(total - bound) <= tol:
            break
        if total > bound:
            lam_lo = lam
        else:
            lam_hi = lam
        if lam_hi - lam_lo <= 1e-16 * lam_hi:
            break

    for i in range(n):
        sigma2[i] = _rsi_stream(products[i], relay_powers[i], lam)
    return sigma2, lam, False


@njit(cache=True)
def _rsi_stream(a, g, lam):
    if a <= 0.0 or g <= 0.0:
        return 0.0
    x = 0.5 * (np.sqrt(a * a + 4.0 * a * g / lam) - a - 2.0)
    if x <= 0.0:
        return 0.0
    return x / g


@njit(cache=True)
def _rsi_total(products, relay_powers, lam):
    total = 0.0
    for i in range(products.shape[0]):
        total += _rsi_stream(products[i], relay_powers[i], lam)
    return total


@njit(cache=True)
def _rate_log2(gains, powers):
    rate = 0.0
    for i in range(gains.shape[0]):
        rate += np.log2(1.0 + gains[i] * powers[i])
    return rate


@njit(cache=True)
def evaluate_g(s2_src, s2_rel, ps, t_bound, relay_power):
    """One evaluation of g(P) = R_sr(P) - R_rd(P) at relay power P.

    The relay-destination side is plain water-filling.  The strongest
    min(source streams, relay streams) relay powers couple into the
    source-relay side, whose saddle point is found by alternating the
    capped water-filling of the source powers with the closed-form
    worst-case interference allocation.  Plain best responses are used
    first; if the interference spectrum is still moving after
    ALTERNATION_PLAIN_SWEEPS the update is relaxed with a diminishing
    step (best-response cycling is possible in a min-max game, a damped
    trajectory settles on the saddle).  Each sweep yields a certified
    bracket: the source response value upper-bounds the saddle and the
    worst case of any source allocation lower-bounds it, so the sweep
    loop also stops once that gap closes below ALTERNATION_GAP_TOL.
    The returned allocation is the best lower-bound pair, i.e. a source
    allocation together with the exact worst case against it, which keeps
    the reported rate achievable.

    Returns (g, r_sr, r_rd, gamma_s, gamma_r, gamma_r_coupled, sigma2_r,
    lam, sweeps, converged).
    """
    n_s = s2_src.shape[0]

    gamma_r, _, _ = water_fill(s2_rel, relay_power)
    r_rd = _rate_log2(s2_rel, gamma_r)

    coupled = np.zeros(n_s)
    m = min(n_s, s2_rel.shape[0])
    for i in range(m):
        coupled[i] = gamma_r[i]

    sigma2 = np.zeros(n_s)
    eff = np.empty(n_s)
    products = np.empty(n_s)
    best_lb = -1.0
    best_lam = 0.0
    gamma_best = np.zeros(n_s)
    sigma_best = np.zeros(n_s)
    sweeps = 0
    converged = False
    # The spectrum-change tolerance scales with the budget so that the
    # multiplier-bisection jitter of the adversary (relative to T) cannot
    # mask convergence when T is large.
    sigma_tol = ALTERNATION_TOL * max(1.0, t_bound)
    for q in range(ALTERNATION_MAX_SWEEPS):
        for i in range(n_s):
            eff[i] = s2_src[i] / (1.0 + coupled[i] * sigma2[i])
        gamma_s, _, _ = capped_water_fill(eff, s2_src, ps)
        ub = 0.0
        for i in range(n_s):
            ub += np.log2(1.0 + s2_src[i] * gamma_s[i] / (1.0 + coupled[i] * sigma2[i]))
            products[i] = s2_src[i] * gamma_s[i]
        response, lam, _ = worst_case_rsi(products, coupled, t_bound)
        lb = 0.0
        for i in range(n_s):
            lb += np.log2(1.0 + products[i] / (1.0 + coupled[i] * response[i]))
        if lb > best_lb:
            best_lb = lb
            best_lam = lam
            for i in range(n_s):
                gamma_best[i] = gamma_s[i]
                sigma_best[i] = response[i]
        sweeps += 1
        delta = 0.0
        step = 1.0 if q < ALTERNATION_PLAIN_SWEEPS else 2.0 / (q - ALTERNATION_PLAIN_SWEEPS + 3.0)
        for i in range(n_s):
            d = abs(response[i] - sigma2[i])
            if d > delta:
                delta = d
            sigma2[i] += step * (response[i] - sigma2[i])
        if delta < sigma_tol or ub - best_lb <= ALTERNATION_GAP_TOL * max(1.0, ub):
            converged = True
            break

    r_sr = best_lb
    return r_sr - r_rd, r_sr, r_rd, gamma_best, gamma_r, coupled, sigma_best, best_lam, sweeps, converged


@njit(cache=True)
def fd_solve(s2_src, s2_rel, ps, pr, t_bound):
    """Worst-case full-duplex rate with the relay-power bisection.

    If g(Pr) >= 0 the relay spends its whole budget and the rate is R_rd;
    otherwise g has exactly one zero in [0, Pr] (R_sr decreases and R_rd
    increases with relay power) which bisection brackets down to a width
    of eps/2 with eps = BISECTION_EPS_REL * Pr.

    Returns (rate, r_sr, r_rd, power_used, gamma_s, gamma_r, sigma2_r, lam,
    inner_sweeps, outer_iters, converged).
    """
    g, r_sr, r_rd, gamma_s, gamma_r, _, sigma2, lam, sweeps, conv = evaluate_g(
        s2_src, s2_rel, ps, t_bound, pr
    )
    if g >= 0.0 or pr <= 0.0:
        rate = r_rd if r_rd < r_sr else r_sr
        return rate, r_sr, r_rd, pr, gamma_s, gamma_r, sigma2, lam, sweeps, 0, conv

    lo = 0.0
    hi = pr
    eps = BISECTION_EPS_REL * pr
    outer = 0
    all_conv = conv
    while hi - lo > 0.5 * eps and outer < BISECTION_MAX_ITERS:
        mid = 0.5 * (lo + hi)
        g, r_sr, r_rd, gamma_s, gamma_r, _, sigma2, lam, sweeps, conv = evaluate_g(
            s2_src, s2_rel, ps, t_bound, mid
        )
        all_conv = all_conv and conv
        if g > 0.0:
            lo = mid
        else:
            hi = mid
        outer += 1

    p_star = 0.5 * (lo + hi)
    g, r_sr, r_rd, gamma_s, gamma_r, _, sigma2, lam, sweeps, conv = evaluate_g(
        s2_src, s2_rel, ps, t_bound, p_star
    )
    all_conv = all_conv and conv
    rate = r_rd if r_rd < r_sr else r_sr
    return rate, r_sr, r_rd, p_star, gamma_s, gamma_r, sigma2, lam, sweeps, outer, all_conv
