use stirred::critical_search::*;
use stirred::mean_field_pde::*;

// Planar front speed measured from classify's front series with early exit off.
fn speed(system: ReactionSystem, model: Model, lambda: f64) -> f64 {
    let spec = ReactionSpec::new(system, lambda, 2, model);
    let cfg = ClassifyConfig {
        early_advance_cells: 1e9,
        horizon: 150.0,
        horizon_max: 150.0,
        headroom: 60.0,
        ..Default::default()
    };
    let v = classify_survival(&spec, &cfg).unwrap();
    let pts: Vec<(f64, f64)> = v.front_positions.iter()
        .filter_map(|(t, p)| p.map(|x| (*t, x)))
        .filter(|(t, _)| *t >= 75.0)
        .collect();
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mx = pts.iter().map(|p| p.1).sum::<f64>() / n;
    pts.iter().map(|p| (p.0 - mt) * (p.1 - mx)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mt).powi(2)).sum::<f64>()
}

fn main() {
    let s10 = speed(ReactionSystem::Sys10, Model::G2, 1.1145);
    println!("sys10 planar speed at table lambda 1.1145: {s10:+.4} -> implied bump radius {:.2}", 1.0 / s10);
    let s12 = speed(ReactionSystem::Sys12 { with_deaths: true }, Model::G1, 0.2715);
    println!("sys12d planar speed at table lambda 0.2715: {s12:+.4} -> implied bump radius {:.2}", 1.0 / s12);
}
