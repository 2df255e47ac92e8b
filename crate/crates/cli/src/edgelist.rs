//! Edge-list text format.
//!
//! ```text
//! # n=4 directed=0
//! 1 2 5
//! 2 3 1
//! ```
//!
//! IDs are 1-based on disk and 0-based in memory. Writing a parsed file
//! reproduces it byte for byte when it is in canonical form (header, then
//! one `u v w` line per edge, `\n` line ends).

use std::fmt::Write as _;

use anyhow::{bail, ensure, Context, Result};
use clique_apsp::hopset::Hopset;
use clique_apsp::skeleton::SkeletonGraph;
use clique_apsp::{Edge, Graph, GraphBuilder};

fn header(n: usize, directed: bool) -> String {
    format!("# n={n} directed={}\n", u8::from(directed))
}

fn push_edges(out: &mut String, edges: &[Edge]) {
    for e in edges {
        writeln!(out, "{} {} {}", e.u + 1, e.v + 1, e.w).unwrap();
    }
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = header(g.n(), g.is_directed());
    push_edges(&mut out, g.edges());
    out
}

fn parse_header(line: &str) -> Result<(usize, bool)> {
    let rest = line.strip_prefix('#').context("missing `# n=<N> directed=<0|1>` header")?;
    let (mut n, mut directed) = (None, None);
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => n = Some(v.parse::<usize>().with_context(|| format!("bad node count {v:?}"))?),
            Some(("directed", "0")) => directed = Some(false),
            Some(("directed", "1")) => directed = Some(true),
            _ => bail!("unexpected header field {field:?}"),
        }
    }
    Ok((n.context("header lacks n=")?, directed.context("header lacks directed=")?))
}

/// Parses the edge-list format. `weight_exponent` bounds weights by `n^C`.
pub fn read_graph(text: &str, weight_exponent: Option<u32>) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().context("empty graph file")?;
    let (n, directed) = parse_header(first)?;
    let mut builder = GraphBuilder::new(n).directed(directed).weight_exponent(weight_exponent);
    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        ensure!(fields.len() == 3, "line {}: expected `u v w`, got {line:?}", no + 1);
        let id = |s: &str| -> Result<usize> {
            let v: usize = s.parse().with_context(|| format!("line {}: bad node ID {s:?}", no + 1))?;
            ensure!(v >= 1 && v <= n, "line {}: node ID {v} outside 1..={n}", no + 1);
            Ok(v - 1)
        };
        let w: u64 = fields[2].parse().with_context(|| format!("line {}: bad weight {:?}", no + 1, fields[2]))?;
        builder = builder.edge(id(fields[0])?, id(fields[1])?, w);
    }
    Ok(builder.build()?)
}

/// Hopset shortcuts as a directed edge list over the graph's `n` nodes.
pub fn write_hopset(n: usize, h: &Hopset) -> String {
    let mut out = header(n, true);
    push_edges(&mut out, &h.edges);
    out
}

/// Skeleton export: node set, center of every node, then the skeleton
/// edges labelled with the original IDs.
pub fn write_skeleton(sk: &SkeletonGraph) -> String {
    let n = sk.center.len();
    let mut out = String::new();
    let nodes: Vec<String> = sk.nodes.iter().map(|v| (v + 1).to_string()).collect();
    writeln!(out, "# skeleton nodes={}", nodes.join(",")).unwrap();
    let centers: Vec<String> = sk.center.iter().map(|c| (c + 1).to_string()).collect();
    writeln!(out, "# centers={}", centers.join(",")).unwrap();
    out.push_str(&header(n, false));
    push_edges(&mut out, &sk.edges_in_g());
    out
}
