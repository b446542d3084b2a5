use sepbody_core::directional::DirectionalDistribution;
use sepbody_core::geometry::{VPolytope, Vector};
use sepbody_core::parallel::{map_replications, substream};
use sepbody_core::poisson::{default_window_radius, sample_kcell_with_rng, ProcessParams};
use sepbody_core::sepbody::m_value;

fn main() {
    let body = VPolytope::symmetric_box(2, 1.0).unwrap();
    let dist = DirectionalDistribution::sigma(2, 360).unwrap();
    let n = 5u32;
    let params = ProcessParams::new(n, dist.clone(), default_window_radius(&body, &dist, n), 4141).unwrap();
    let reps = 40_000usize;
    let pts = [
        Vector(vec![1.3, 1.3]),   // vertex region
        Vector(vec![1.5, 0.0]),   // face region
        Vector(vec![2.0, 2.0]),   // far vertex region
        Vector(vec![0.5, 0.5]),   // interior (P=1)
    ];
    let results: Vec<Vec<bool>> = map_replications(reps, |k| {
        let mut rng = substream(params.seed, k as u64);
        let s = sample_kcell_with_rng(&body, &params, &mut rng)?;
        Ok::<Vec<bool>, sepbody_core::Error>(
            pts.iter().map(|x| s.polytope.contains(x, 1e-9).unwrap()).collect(),
        )
    })
    .unwrap();
    for (j, x) in pts.iter().enumerate() {
        let m = m_value(&body, &dist, x);
        let p_theory = (-(n as f64) * m).exp();
        let hits = results.iter().filter(|r| r[j]).count();
        let p_emp = hits as f64 / reps as f64;
        let se = (p_emp * (1.0 - p_emp) / reps as f64).sqrt();
        println!(
            "x=({:.2},{:.2}) m={:.5} P_theory={:.5} P_emp={:.5} +- {:.5}  z={:+.2}",
            x[0], x[1], m, p_theory, p_emp, se, (p_emp - p_theory) / se.max(1e-12)
        );
    }
}
