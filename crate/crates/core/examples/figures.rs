//! Rebuild the data behind a stock figure grid and summarize each curve.
//!
//! `sop figure N` writes the same rows as CSV plus a gnuplot-friendly data
//! file; here the rows stay in memory and get folded into one line per curve.

use crn_sop::{reproduce_figure, Method, RunConfig};

fn main() {
    let fig: u8 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("figure number"))
        .unwrap_or(7);

    let cfg = RunConfig::reference();
    let rows = reproduce_figure(fig, &cfg, &[Method::Exact]).unwrap();

    println!("figure {fig}: {} rows", rows.len());
    let mut seen: Vec<String> = Vec::new();
    for r in &rows {
        let curve = format!("{} {}", r.scenario.label(), r.label);
        if !seen.contains(&curve) {
            seen.push(curve);
        }
    }
    for curve in &seen {
        let pts: Vec<&crn_sop::ResultRow> = rows
            .iter()
            .filter(|r| format!("{} {}", r.scenario.label(), r.label) == *curve)
            .collect();
        let lo = pts.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|r| r.value).fold(0.0f64, f64::max);
        println!(
            "  {curve:<24} {} points over {} = {:?}..{:?}, sop {lo:.4}..{hi:.4}",
            pts.len(),
            pts[0].axis,
            pts[0].x,
            pts.last().unwrap().x
        );
    }
}
