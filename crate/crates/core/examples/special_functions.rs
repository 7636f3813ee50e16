//! A look under the hood of the transform engine that powers the closed forms.
//!
//! Kernels are specified as products of gamma factors of a complex variable
//! and integrated over a vertical contour. When the poles line up on integer
//! lattices the engine sums residues instead; both routes are exposed, and the
//! outage expressions rely on them agreeing.

use crn_sop::specfun::gamma::{gamma_lower, gamma_upper, ln_gamma};
use crn_sop::specfun::mellin::{
    eval_contour, eval_residue_series, evaluate, GammaFactor, MellinBarnesSpec,
};

fn main() {
    // this kernel has the elementary value z / (1 + z)
    let spec = MellinBarnesSpec::new(vec![GammaFactor::plus(1.0), GammaFactor::minus(0.0)]);
    println!("kernel with an elementary closed form:");
    for z in [0.1, 0.4, 0.8] {
        let got = evaluate(&spec, z, 1e-13).unwrap();
        println!(
            "  z = {z}: engine {:.12}  elementary {:.12}  ({} route, {} terms)",
            got.value,
            z / (1.0 + z),
            match got.method {
                crn_sop::specfun::mellin::EvalMethod::ResidueSeries => "series",
                crn_sop::specfun::mellin::EvalMethod::ContourQuadrature => "contour",
            },
            got.terms_used
        );
    }

    // a heavier kernel of the kind the first-hop outage integrates, with an
    // upper-incomplete factor; the two routes are fully independent code paths
    let heavy = MellinBarnesSpec::new(vec![
        GammaFactor::plus(3.0),
        GammaFactor::plus(2.0),
        GammaFactor::minus(2.0),
        GammaFactor::minus(0.0),
        GammaFactor::minus_incomplete(3.0, 0.4),
        GammaFactor::minus_den(1.0),
    ]);
    println!();
    println!("dual routes on an incomplete-gamma kernel:");
    for z in [0.2, 0.5, 0.8] {
        let series = eval_residue_series(&heavy, z, 1e-12).unwrap();
        let contour = eval_contour(&heavy, z, 1e-12).unwrap();
        println!(
            "  z = {z}: series {:.12e}  contour {:.12e}  rel gap {:.1e}",
            series.value,
            contour.value,
            ((series.value - contour.value) / contour.value).abs()
        );
    }

    // the incomplete pair recombines into the complete gamma function
    println!();
    println!("lower + upper incomplete against the complete gamma:");
    for (a, x) in [(1.7, 0.9), (3.3, 4.0), (5.0, 12.5)] {
        let total = gamma_lower(a, x).unwrap() + gamma_upper(a, x).unwrap();
        let complete = ln_gamma(a).exp();
        println!("  a = {a}, x = {x}: {total:.12}  vs  {complete:.12}");
    }
}
