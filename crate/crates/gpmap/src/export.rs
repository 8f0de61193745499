//! Plot-ready emitters: curves and baselines as CSV, cluster summaries as
//! JSON, and component graphs as DOT or a JSON node/edge document.

use std::io::{self, Write};

use serde_json::json;

use crate::analysis::clusters::{ClusterComponent, ClusterSet};
use crate::analysis::curves::DensityCurve;
use crate::analysis::hamming::{for_each_neighbor_rank, pow_table, robustness};
use crate::census::Census;
use crate::error::Result;

/// Fixed 12-significant-digit rendering used for every real-valued column.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub const CURVES_CSV_HEADER: &str = "rank,n,cum_viable,cum_total,rho,phi";

pub fn write_curves_header(w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "{CURVES_CSV_HEADER}")
}

/// One row per depth n for one genotype.
pub fn write_curve_rows(w: &mut impl Write, curve: &DensityCurve) -> io::Result<()> {
    for n in 0..curve.phi.len() {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            curve.rank,
            n,
            curve.cum_viable[n],
            curve.cum_total[n],
            sig12(curve.rho[n]),
            sig12(curve.phi[n]),
        )?;
    }
    Ok(())
}

/// Mean-curve rows carry `mean` in the rank column; the integer cumulative
/// columns stay empty and rho is D^phi (the geometric mean density).
pub fn write_mean_curve_rows(w: &mut impl Write, alphabet: u8, mean_phi: &[f64]) -> io::Result<()> {
    for (n, &phi) in mean_phi.iter().enumerate() {
        let rho = (alphabet as f64).powf(phi);
        writeln!(w, "mean,{},,,{},{}", n, sig12(rho), sig12(phi))?;
    }
    Ok(())
}

pub const BASELINES_CSV_HEADER: &str = "n,phi_min,phi_ne";

pub fn write_baselines_csv(
    w: &mut impl Write,
    phi_min: &[f64],
    phi_ne: &[f64],
) -> io::Result<()> {
    writeln!(w, "{BASELINES_CSV_HEADER}")?;
    for (n, (&lo, &ne)) in phi_min.iter().zip(phi_ne).enumerate() {
        writeln!(w, "{},{},{}", n, sig12(lo), sig12(ne))?;
    }
    Ok(())
}

/// Cluster summary document: sizes descending, one entry per component.
pub fn clusters_to_json(set: &ClusterSet) -> serde_json::Value {
    json!({
        "mode": set.mode.to_string(),
        "components": set.components.iter().map(|c| json!({
            "id": c.id,
            "size": c.size,
            "representative": c.representative,
            "edge_count": c.edge_count,
        })).collect::<Vec<_>>(),
    })
}

/// Viable one-mutant pairs inside a component, smaller rank first,
/// ordered lexicographically.
fn component_edges(census: &Census, component: &ClusterComponent) -> Vec<(u64, u64)> {
    let pows = pow_table(census.length, census.alphabet());
    let mut edges = Vec::new();
    for &rank in &component.member_ranks {
        let genome = census.genome(rank).expect("member rank within space");
        for_each_neighbor_rank(genome.symbols(), rank, census.alphabet(), &pows, |n| {
            if n > rank && census.is_viable(n) {
                edges.push((rank, n));
            }
        });
    }
    edges.sort_unstable();
    edges
}

/// JSON node/edge document for one component: nodes carry rank, letters and
/// robustness; edges are viable one-mutant pairs.
pub fn component_graph_json(census: &Census, component: &ClusterComponent) -> Result<serde_json::Value> {
    let mut nodes = Vec::with_capacity(component.member_ranks.len());
    for &rank in &component.member_ranks {
        nodes.push(json!({
            "rank": rank,
            "letters": census.genome(rank)?.letters(),
            "robustness": robustness(census, rank)?,
        }));
    }
    let edges: Vec<serde_json::Value> = component_edges(census, component)
        .into_iter()
        .map(|(a, b)| json!([a, b]))
        .collect();
    Ok(json!({
        "component": component.id,
        "size": component.size,
        "nodes": nodes,
        "edges": edges,
    }))
}

/// The same graph as DOT: nodes named by rank, labelled with the letter
/// string, robustness attached as an attribute.
pub fn component_graph_dot(census: &Census, component: &ClusterComponent) -> Result<String> {
    let mut out = String::new();
    out.push_str(&format!("graph component_{} {{\n", component.id));
    for &rank in &component.member_ranks {
        let letters = census.genome(rank)?.letters();
        let nu = robustness(census, rank)?;
        out.push_str(&format!(
            "  {rank} [label=\"{letters}\", robustness={nu}];\n"
        ));
    }
    for (a, b) in component_edges(census, component) {
        out.push_str(&format!("  {a} -- {b};\n"));
    }
    out.push_str("}\n");
    Ok(out)
}

pub const ROBUSTNESS_CSV_HEADER: &str = "rank,letters,robustness";

pub fn write_robustness_csv(w: &mut impl Write, census: &Census, ranks: &[u64]) -> Result<()> {
    writeln!(w, "{ROBUSTNESS_CSV_HEADER}")?;
    for &rank in ranks {
        writeln!(
            w,
            "{},{},{}",
            rank,
            census.genome(rank)?.letters(),
            robustness(census, rank)?
        )?;
    }
    Ok(())
}

pub fn robustness_to_json(census: &Census, ranks: &[u64]) -> Result<serde_json::Value> {
    let mut rows = Vec::with_capacity(ranks.len());
    for &rank in ranks {
        rows.push(json!({
            "rank": rank,
            "letters": census.genome(rank)?.letters(),
            "robustness": robustness(census, rank)?,
        }));
    }
    Ok(serde_json::Value::Array(rows))
}
