//! Named Mellin-Barnes transform shapes used by the outage closed forms.
//!
//! Each shape is the Mellin image of an elementary average: a gamma-weighted
//! integral of a regularized incomplete gamma CDF. The unit tests pin every
//! shape against that elementary integral (or against frozen high-precision
//! values), so the residue machinery and the direct quadrature are both
//! covered by independent oracles.

use crate::error::{Error, Result};
use crate::specfun::gamma;
use crate::specfun::mellin::{evaluate, GammaFactor, MellinBarnesSpec, MellinEval};

/// Builds the factor model of G^{m,n}_{p,q}(z | a; b) from the usual
/// parameter rows. `a_top` holds a_1..a_n, each with an optional second
/// argument turning Gamma(1 - a_v - s) into the upper incomplete
/// Gamma(1 - a_v - s, phi); `a_bottom` holds a_{n+1}..a_p; `b_top` holds
/// b_1..b_m; `b_bottom` holds b_{m+1}..b_q.
pub fn from_meijer_params(
    a_top: &[(f64, Option<f64>)],
    a_bottom: &[f64],
    b_top: &[f64],
    b_bottom: &[f64],
) -> MellinBarnesSpec {
    let mut factors = Vec::new();
    for &b in b_top {
        factors.push(GammaFactor::plus(b));
    }
    for &(a, phi) in a_top {
        match phi {
            None => factors.push(GammaFactor::minus(1.0 - a)),
            Some(p) => factors.push(GammaFactor::minus_incomplete(1.0 - a, p)),
        }
    }
    for &a in a_bottom {
        factors.push(GammaFactor::plus_den(a));
    }
    for &b in b_bottom {
        factors.push(GammaFactor::minus_den(1.0 - b));
    }
    MellinBarnesSpec::new(factors)
}

fn shape_ge1(value: i64, name: &str) -> Result<f64> {
    if value < 1 {
        return Err(Error::InvalidSpec(format!(
            "{name} must be at least 1, got {value}"
        )));
    }
    Ok(value as f64)
}

/// Gamma(e + s) Gamma(1 + l - s) Gamma(-s) / Gamma(1 - s): the Mellin image
/// of int_0^inf t^l e^{-t} gammainc_lower(e, z t) dt, the basic per-hop
/// eavesdropper average.
pub fn hop_transform(l: u32, e_shape: u32, z: f64, tol: f64) -> Result<MellinEval> {
    let e = shape_ge1(e_shape as i64, "e_shape")?;
    let spec = MellinBarnesSpec::new(vec![
        GammaFactor::plus(e),
        GammaFactor::minus(1.0 + l as f64),
        GammaFactor::minus(0.0),
        GammaFactor::minus_den(1.0),
    ]);
    evaluate(&spec, z, tol)
}

/// Gamma(mu + s) Gamma(LE_J + s) Gamma(1 + h - s) Gamma(-s) / Gamma(1 - s)
/// with mu = LE_i - h + l: the jammer-path average with the peak-power
/// constraint inactive on the jammer.
pub fn meijer_m1(h: u32, l: u32, le_i: u32, le_j: u32, z: f64, tol: f64) -> Result<MellinEval> {
    let mu = shape_ge1(le_i as i64 - h as i64 + l as i64, "mu = LE_i - h + l")?;
    let lej = shape_ge1(le_j as i64, "LE_J")?;
    let spec = MellinBarnesSpec::new(vec![
        GammaFactor::plus(mu),
        GammaFactor::plus(lej),
        GammaFactor::minus(1.0 + h as f64),
        GammaFactor::minus(0.0),
        GammaFactor::minus_den(1.0),
    ]);
    evaluate(&spec, z, tol)
}

/// The M1 factors times the incomplete Gamma(m_JP - s, phi_J): the jammer
/// average restricted to the interference-limited power region.
pub fn meijer_m2(
    h: u32,
    l: u32,
    le_i: u32,
    le_j: u32,
    m_jp: u32,
    phi_j: f64,
    z: f64,
    tol: f64,
) -> Result<MellinEval> {
    let mu = shape_ge1(le_i as i64 - h as i64 + l as i64, "mu = LE_i - h + l")?;
    let lej = shape_ge1(le_j as i64, "LE_J")?;
    let mjp = shape_ge1(m_jp as i64, "m_JP")?;
    let spec = MellinBarnesSpec::new(vec![
        GammaFactor::plus(mu),
        GammaFactor::plus(lej),
        GammaFactor::minus(1.0 + h as f64),
        GammaFactor::minus(0.0),
        GammaFactor::minus_incomplete(mjp, phi_j),
        GammaFactor::minus_den(1.0),
    ]);
    evaluate(&spec, z, tol)
}

/// Gamma(LR + s) Gamma(m_P - s, phi) / s: the Mellin image of
/// int_phi^inf u^{m_P - 1} e^{-u} Gamma(LR, z u) du, the legitimate-link
/// tail average over the interference-limited power region.
pub fn meijer_m3(lr: u32, m_p: u32, phi: f64, z: f64, tol: f64) -> Result<MellinEval> {
    let lr = shape_ge1(lr as i64, "LR")?;
    let mp = shape_ge1(m_p as i64, "m_P")?;
    let spec = MellinBarnesSpec::with_pole_at_zero(vec![
        GammaFactor::plus(lr),
        GammaFactor::minus_incomplete(mp, phi),
    ]);
    evaluate(&spec, z, tol)
}

/// Gamma(m_JP - s, phi_J) Gamma(LE_J + s) Gamma(-s) / Gamma(1 - s): the
/// Mellin image of int_phi^inf u^{m-1} e^{-u} gammainc_lower(LE_J, x u) du.
pub fn meijer_delta(le_j: u32, m_jp: u32, phi_j: f64, x: f64, tol: f64) -> Result<MellinEval> {
    let lej = shape_ge1(le_j as i64, "LE_J")?;
    let mjp = shape_ge1(m_jp as i64, "m_JP")?;
    let spec = MellinBarnesSpec::new(vec![
        GammaFactor::plus(lej),
        GammaFactor::minus(0.0),
        GammaFactor::minus_incomplete(mjp, phi_j),
        GammaFactor::minus_den(1.0),
    ]);
    evaluate(&spec, x, tol)
}

/// The delta factors times Gamma(1 + h - s). The factor balance tips to the
/// divergent side for a residue expansion, so this shape always integrates
/// along the contour.
pub fn meijer_theta2(
    h: u32,
    le_j: u32,
    m_jp: u32,
    phi_j: f64,
    w: f64,
    tol: f64,
) -> Result<MellinEval> {
    let lej = shape_ge1(le_j as i64, "LE_J")?;
    let mjp = shape_ge1(m_jp as i64, "m_JP")?;
    let spec = MellinBarnesSpec::new(vec![
        GammaFactor::plus(lej),
        GammaFactor::minus(1.0 + h as f64),
        GammaFactor::minus(0.0),
        GammaFactor::minus_incomplete(mjp, phi_j),
        GammaFactor::minus_den(1.0),
    ]);
    evaluate(&spec, w, tol)
}

/// V(a, x) = int_x^inf t^{a-1} e^{-t} ln(t/x) dt, the order-derivative
/// correction of the upper incomplete gamma appearing in double-pole
/// residues. Computed by direct quadrature; the factor model
/// Gamma(a + s) / s^2 is cross-checked against it in the tests.
pub fn meijer_v(a: f64, x: f64) -> Result<f64> {
    gamma::v_integral(a, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::{gamma_p, gamma_upper, ln_gamma};
    use crate::specfun::quad::integrate_decaying;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn meijer_params_constructor_matches_direct_factors() {
        // hop shape as G^{1,2}_{2,2}(z | -l, 1; e, 0)
        let l = 2u32;
        let e = 3u32;
        let spec = from_meijer_params(
            &[(-(l as f64), None), (1.0, None)],
            &[],
            &[e as f64],
            &[0.0],
        );
        for &z in &[0.3, 1.7] {
            let a = evaluate(&spec, z, 1e-11).unwrap();
            let b = hop_transform(l, e, z, 1e-11).unwrap();
            assert!(rel(a.value, b.value) < 1e-12, "z={z}");
        }
    }

    #[test]
    fn hop_matches_elementary_average() {
        // int_0^inf t^l e^{-t} P(e, z t) dt * Gamma(1 + l) normalization:
        // the transform shape carries the unnormalized lower incomplete,
        // hop(z) = int_0^inf t^l e^{-t} gamma_lower(e, z t) dt
        for &(l, e, z) in &[(0u32, 2u32, 0.45), (2, 3, 0.4), (1, 4, 3.0)] {
            let oracle = integrate_decaying(
                &|t: f64| {
                    t.powi(l as i32)
                        * (-t).exp()
                        * gamma_p(e as f64, z * t).unwrap()
                        * ln_gamma(e as f64).exp()
                },
                0.0,
                1e-11,
            );
            let got = hop_transform(l, e, z, 1e-11).unwrap().value;
            assert!(
                rel(got, oracle) < 1e-7,
                "hop(l={l}, e={e}, z={z}) = {got}, oracle {oracle}"
            );
        }
    }

    #[test]
    fn m1_frozen_reference() {
        // frozen from 30-digit arithmetic; the (mu = LE_J) rows exercise the
        // logarithmic double-pole ladder end to end
        let cases = [
            // (h, l, le_i, le_j, z, want) with mu = le_i - h + l
            (2u32, 1u32, 4u32, 5u32, 1.7, 15.492478693004141977),
            (0, 0, 1, 1, 0.25, 0.33522136120784833816),
            (1, 1, 4, 4, 8.0, 18.237488037788097476),
            (3, 1, 4, 7, 0.6, 311.98298418307180883),
        ];
        for (h, l, le_i, le_j, z, want) in cases {
            let got = meijer_m1(h, l, le_i, le_j, z, 1e-12).unwrap().value;
            assert!(
                rel(got, want) < 1e-9,
                "m1(h={h}, l={l}, LEi={le_i}, LEj={le_j}, z={z}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn m2_reduces_to_m1_average_at_zero_phi() {
        // phi = 0 completes the factor: Gamma(m_JP - s, 0) = Gamma(m_JP - s),
        // whose elementary image is the full-range average of M1
        let (h, l, le_i, le_j, m_jp) = (1u32, 0u32, 3u32, 2u32, 1u32);
        let z = 0.35;
        let got = meijer_m2(h, l, le_i, le_j, m_jp, 0.0, z, 1e-11).unwrap().value;
        let oracle = integrate_decaying(
            &|u: f64| {
                if u <= 0.0 {
                    return 0.0;
                }
                (-u).exp() * meijer_m1(h, l, le_i, le_j, z * u, 1e-10).unwrap().value
            },
            0.0,
            1e-9,
        );
        assert!(rel(got, oracle) < 1e-6, "got {got}, oracle {oracle}");
    }

    #[test]
    fn m2_matches_elementary_average_series_route() {
        let (h, l, le_i, le_j, m_jp, phi_j, z) = (1u32, 1u32, 3u32, 4u32, 3u32, 0.8, 0.22);
        let got = meijer_m2(h, l, le_i, le_j, m_jp, phi_j, z, 1e-11).unwrap();
        let oracle = integrate_decaying(
            &|u: f64| {
                ((m_jp as f64 - 1.0) * u.ln() - u).exp()
                    * meijer_m1(h, l, le_i, le_j, z * u, 1e-10).unwrap().value
            },
            phi_j,
            1e-9,
        );
        assert!(
            rel(got.value, oracle) < 1e-6,
            "got {}, oracle {oracle}",
            got.value
        );
    }

    #[test]
    fn m2_matches_elementary_average_contour_route() {
        use crate::specfun::mellin::EvalMethod;
        let (h, l, le_i, le_j, m_jp, phi_j, z) = (1u32, 1u32, 3u32, 2u32, 2u32, 0.6, 1.5);
        let got = meijer_m2(h, l, le_i, le_j, m_jp, phi_j, z, 1e-10).unwrap();
        assert_eq!(got.method, EvalMethod::ContourQuadrature);
        let oracle = integrate_decaying(
            &|u: f64| {
                ((m_jp as f64 - 1.0) * u.ln() - u).exp()
                    * meijer_m1(h, l, le_i, le_j, z * u, 1e-9).unwrap().value
            },
            phi_j,
            1e-8,
        );
        assert!(
            rel(got.value, oracle) < 1e-5,
            "got {}, oracle {oracle}",
            got.value
        );
    }

    #[test]
    fn m3_matches_elementary_average() {
        for &(lr, m_p, phi, z) in &[(2u32, 3u32, 0.9, 0.3), (4, 1, 0.05, 0.08), (3, 3, 2.5, 1.4)] {
            let got = meijer_m3(lr, m_p, phi, z, 1e-11).unwrap().value;
            let oracle = integrate_decaying(
                &|u: f64| {
                    ((m_p as f64 - 1.0) * u.ln() - u).exp()
                        * gamma_upper(lr as f64, z * u).unwrap()
                },
                phi,
                1e-11,
            );
            assert!(
                rel(got, oracle) < 1e-8,
                "m3(LR={lr}, mP={m_p}, phi={phi}, z={z}) = {got}, oracle {oracle}"
            );
        }
    }

    #[test]
    fn m3_small_argument_saturates_to_complete_products() {
        // z -> 0: only the origin residue survives, Gamma(LR) Gamma(m_P, phi)
        let (lr, m_p, phi) = (3u32, 2u32, 0.7);
        let got = meijer_m3(lr, m_p, phi, 1e-8, 1e-12).unwrap().value;
        let want = ln_gamma(lr as f64).exp() * gamma_upper(m_p as f64, phi).unwrap();
        assert!(rel(got, want) < 1e-6, "got {got}, want {want}");
    }

    #[test]
    fn delta_matches_elementary_average() {
        for &(le_j, m_jp, phi, x) in &[(2u32, 3u32, 0.4, 0.5), (5, 2, 1.1, 0.2), (1, 1, 0.8, 2.2)]
        {
            let got = meijer_delta(le_j, m_jp, phi, x, 1e-11).unwrap().value;
            let oracle = integrate_decaying(
                &|u: f64| {
                    ((m_jp as f64 - 1.0) * u.ln() - u).exp()
                        * gamma_p(le_j as f64, x * u).unwrap()
                        * ln_gamma(le_j as f64).exp()
                },
                phi,
                1e-11,
            );
            assert!(
                rel(got, oracle) < 1e-7,
                "delta(LEJ={le_j}, mJP={m_jp}, phi={phi}, x={x}) = {got}, oracle {oracle}"
            );
        }
    }

    #[test]
    fn theta2_matches_nested_elementary_average() {
        use crate::specfun::mellin::EvalMethod;
        let (h, le_j, m_jp, phi, w) = (1u32, 2u32, 2u32, 0.5, 0.7);
        let got = meijer_theta2(h, le_j, m_jp, phi, w, 1e-10).unwrap();
        assert_eq!(got.method, EvalMethod::ContourQuadrature);
        let inner = |x: f64| -> f64 {
            integrate_decaying(
                &|u: f64| {
                    ((m_jp as f64 - 1.0) * u.ln() - u).exp()
                        * gamma_p(le_j as f64, x * u).unwrap()
                        * ln_gamma(le_j as f64).exp()
                },
                phi,
                1e-10,
            )
        };
        let oracle = integrate_decaying(&|t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            t.powi(h as i32) * (-t).exp() * inner(w * t)
        }, 0.0, 1e-8);
        assert!(
            rel(got.value, oracle) < 1e-5,
            "got {}, oracle {oracle}",
            got.value
        );
    }

    #[test]
    fn m1_small_argument_power_law() {
        // leading left pole sets the low-z slope: min(mu, LE_J), with the
        // logarithmic correction mu = LE_J showing up as -1/ln(1/z)
        let slope = |h: u32, l: u32, le_i: u32, le_j: u32| -> f64 {
            let z1 = 1e-4;
            let z2 = 2e-4;
            let v1 = meijer_m1(h, l, le_i, le_j, z1, 1e-12).unwrap().value;
            let v2 = meijer_m1(h, l, le_i, le_j, z2, 1e-12).unwrap().value;
            (v2 / v1).ln() / (z2 / z1).ln()
        };
        // mu = 2, LE_J = 5: slope 2
        assert!((slope(1, 0, 3, 5) - 2.0).abs() < 1e-2);
        // mu = 5, LE_J = 3: slope 3
        assert!((slope(0, 1, 4, 3) - 3.0).abs() < 1e-2);
        // mu = LE_J = 3: the colliding ladders make a double pole, so
        // M ~ z^3 (A ln(1/z) + B). Check the logarithmic structure itself:
        // y = M / z^3 must be linear in ln(1/z) (endpoint fit predicts the
        // midpoint) and must grow as z falls, which a pure power law cannot.
        let y = |z: f64| meijer_m1(1, 1, 3, 3, z, 1e-12).unwrap().value / z.powi(3);
        let (za, zb, zc) = (1e-5f64, 1e-4f64, 1e-3f64);
        let (ya, yb, yc) = (y(za), y(zb), y(zc));
        let (la, lb, lc) = ((1.0 / za).ln(), (1.0 / zb).ln(), (1.0 / zc).ln());
        let a_fit = (ya - yc) / (la - lc);
        let b_fit = ya - a_fit * la;
        assert!(a_fit > 0.0, "log coefficient must be positive, got {a_fit}");
        let pred = a_fit * lb + b_fit;
        assert!(
            ((pred - yb) / yb).abs() < 5e-3,
            "midpoint {yb} vs linear-in-log model {pred}"
        );
        assert!(ya / yc > 1.5, "missing logarithmic growth: {ya} vs {yc}");
    }

    #[test]
    fn v_wrapper_consistency() {
        // same quantity through the factor model Gamma(a+s)/s^2
        let spec = MellinBarnesSpec::new(vec![
            GammaFactor::plus(2.0),
            GammaFactor::plus(0.0),
            GammaFactor::plus(0.0),
            GammaFactor::plus_den(1.0),
            GammaFactor::plus_den(1.0),
        ]);
        let z = 0.9;
        let series = evaluate(&spec, z, 1e-12).unwrap().value;
        let direct = meijer_v(2.0, z).unwrap();
        assert!(rel(series, direct) < 1e-8, "{series} vs {direct}");
    }

    #[test]
    fn shape_validation() {
        // mu must stay positive
        assert!(meijer_m1(5, 0, 3, 2, 0.5, 1e-10).is_err());
        assert!(meijer_m3(0, 2, 0.5, 0.5, 1e-10).is_err());
        assert!(hop_transform(0, 0, 0.5, 1e-10).is_err());
    }
}
