//! Loading bodies and directional distributions, and writing outputs.

use sepbody_core::directional::DirectionalDistribution;
use sepbody_core::geometry::{VPolytope, Vector};

pub fn load_body(path: &str) -> Result<VPolytope, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read body {path}: {e}"))?;
    let parsed: VPolytope =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse body {path}: {e}"))?;
    // round-trip through the constructor to restore the dimension field and
    // run the invariant checks
    VPolytope::new(parsed.vertices().to_vec()).map_err(|e| format!("invalid body {path}: {e}"))
}

/// Preset string or JSON file path.
pub fn load_phi(spec: &str) -> Result<DirectionalDistribution, String> {
    let axes = |d: usize| {
        let pairs: Vec<(Vector, f64)> = (0..d).map(|i| (Vector::unit(d, i), 1.0)).collect();
        DirectionalDistribution::discrete(&pairs).map_err(|e| e.to_string())
    };
    if spec == "axes2d" {
        return axes(2);
    }
    if spec == "axes3d" {
        return axes(3);
    }
    if let Some(order) = spec.strip_prefix("sigma2d:") {
        let order: usize = order
            .parse()
            .map_err(|_| format!("bad quadrature order in `{spec}`"))?;
        return DirectionalDistribution::sigma(2, order).map_err(|e| e.to_string());
    }
    if let Some(order) = spec.strip_prefix("sigma3d:") {
        let order: usize = order
            .parse()
            .map_err(|_| format!("bad quadrature order in `{spec}`"))?;
        return DirectionalDistribution::sigma(3, order).map_err(|e| e.to_string());
    }
    if let Some(body_path) = spec.strip_prefix("facets:") {
        let body = load_body(body_path)?;
        return DirectionalDistribution::facet_measure(&body).map_err(|e| e.to_string());
    }
    let text =
        std::fs::read_to_string(spec).map_err(|e| format!("cannot read distribution {spec}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse distribution {spec}: {e}"))
}

pub fn parse_vector(text: &str) -> Result<Vector, String> {
    let coords: Result<Vec<f64>, _> = text.split(',').map(|c| c.trim().parse::<f64>()).collect();
    match coords {
        Ok(c) if c.len() >= 2 => Ok(Vector(c)),
        _ => Err(format!("cannot parse coordinates `{text}`")),
    }
}

/// Semicolon-separated list of comma-separated coordinates.
pub fn parse_vectors(text: &str) -> Result<Vec<Vector>, String> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(parse_vector)
        .collect()
}

pub fn write_output(out: &Option<String>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, content).map_err(|e| format!("cannot write {path}: {e}"))
        }
        None => {
            println!("{content}");
            Ok(())
        }
    }
}
