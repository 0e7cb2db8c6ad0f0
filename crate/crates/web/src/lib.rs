//! wasm-bindgen entry points for the browser demo. Every export returns a JSON
//! string; failures come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use flockgq::blt::{blt_build, fingerprint, verify_blt, BltParams, Family};
use flockgq::graph::Graph;
use flockgq::knarr::FlockGq;
use flockgq::singer::{bundled_pi, collinearity_graph, pi_hemisystem, verify_point_hemisystem, SingerFrame};
use flockgq::typeone::{admissible_base_lines, concurrency_graph, verify_hemisystem, Orientation, TypeOneFrame};
use flockgq::Result;

/// Graphs above this many edges are summarized without an edge list.
const MAX_DRAWN_EDGES: usize = 20_000;

fn wrap(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn graph_json(g: &Graph) -> Value {
    let srg = match g.srg_check() {
        Ok(p) => json!(p),
        Err(f) => json!({ "failure": f.reason }),
    };
    let n = g.num_vertices();
    let edges: Option<Vec<[u32; 2]>> = (g.num_edges() <= MAX_DRAWN_EDGES).then(|| {
        (0..n)
            .flat_map(|a| g.neighbors(a).iter().filter(move |&&b| b as usize > a).map(move |&b| [a as u32, b]))
            .collect()
    });
    json!({ "vertices": n, "srg": srg, "edges": edges })
}

fn family_set(family: &str, q: u32) -> Result<flockgq::blt::BltSet> {
    let family: Family = family.parse()?;
    blt_build(family, q, BltParams::default())
}

/// BLT-set of `family` over GF(q) with its verification report and fingerprint.
#[wasm_bindgen]
pub fn blt_summary(family: &str, q: u32) -> String {
    wrap((|| {
        let b = family_set(family, q)?;
        let report = verify_blt(&b)?;
        Ok(json!({
            "family": family,
            "q": q,
            "passed": report.passed(),
            "report": report,
            "fingerprint": fingerprint(&b),
        }))
    })())
}

/// Type I hemisystem. `ell_index` picks an admissible line of W(3,q);
/// `s` is a comma separated list of 1-based plane indices, or empty for the
/// first valid choice.
#[wasm_bindgen]
pub fn type_one(family: &str, q: u32, ell_index: usize, s: &str, orientation: &str) -> String {
    wrap((|| {
        let gq = FlockGq::build(family_set(family, q)?)?;
        let lines = admissible_base_lines(gq.blt())?;
        let base = lines.get(ell_index).ok_or_else(|| {
            flockgq::Error::Config(format!("ell index {ell_index} out of range 0..{}", lines.len()))
        })?;
        let frame = TypeOneFrame::from_base_line(&gq, base)?;
        let subsets = frame.all_subsets();
        let s: Vec<usize> = if s.trim().is_empty() {
            subsets.first().cloned().unwrap_or_default()
        } else {
            s.split(',')
                .map(|t| t.trim().parse().map_err(|_| flockgq::Error::Config(format!("bad plane index {t:?}"))))
                .collect::<Result<_>>()?
        };
        let h = frame.build(&gq, &s, orientation.parse::<Orientation>()?)?;
        let r = verify_hemisystem(&gq, &h.lines);
        Ok(json!({
            "q": q,
            "admissible_lines": lines.len(),
            "base_plane": frame.base_plane + 1,
            "subsets": subsets,
            "S": s,
            "size": h.lines.len(),
            "hemisystem": r.passed,
            "graph": graph_json(&concurrency_graph(&gq, &h.lines)),
        }))
    })())
}

/// Bundled Singer-type point-hemisystem of Q^-(5,q), q in {3, 5, 7, 9}.
#[wasm_bindgen]
pub fn singer(q: u32) -> String {
    wrap((|| {
        let frame = SingerFrame::new(q)?;
        let h = pi_hemisystem(&frame, &bundled_pi(q)?)?;
        let r = verify_point_hemisystem(&frame, &h.lines);
        Ok(json!({
            "q": q,
            "size": h.lines.len(),
            "hemisystem": r.passed,
            "graph": graph_json(&collinearity_graph(&frame, &h.lines)),
        }))
    })())
}
