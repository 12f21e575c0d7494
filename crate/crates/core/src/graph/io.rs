//! Whitespace-separated edge-list formats.
//!
//! Both formats start with a header line `N L`. Multiplex lines read
//! `layer i j weight`; general multilayer lines read `k i l j weight`
//! for an edge from node `i` in layer `k` to node `j` in layer `l`.
//! Lines starting with `#` and blank lines are skipped.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{EdgeKey, MultilayerNetwork, MultiplexNetwork, Network};
use crate::error::{Error, Result};

pub fn load_multiplex(path: impl AsRef<Path>, gamma: f64, directed: bool) -> Result<MultiplexNetwork> {
    parse_multiplex(&read(path.as_ref())?, gamma, directed)
}

pub fn load_multilayer(path: impl AsRef<Path>, directed: bool) -> Result<MultilayerNetwork> {
    parse_multilayer(&read(path.as_ref())?, directed)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_multiplex(text: &str, gamma: f64, directed: bool) -> Result<MultiplexNetwork> {
    let (n, layers, rows) = parse_rows(text, 4)?;
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(rows.len());
    for (line, f) in rows {
        let layer = index(&f[0], line, "layer", layers)?;
        let i = index(&f[1], line, "node", n)?;
        let j = index(&f[2], line, "node", n)?;
        let w = weight(&f[3], line)?;
        let edge = EdgeKey::intra(i, j, layer);
        if i == j {
            return Err(Error::Parse {
                line,
                message: format!("self-loop {edge} is not allowed in a multiplex layer"),
            });
        }
        check_duplicate(&mut seen, edge, directed, line)?;
        edges.push((edge, w));
    }
    MultiplexNetwork::from_edges(n, layers, gamma, directed, edges)
}

pub fn parse_multilayer(text: &str, directed: bool) -> Result<MultilayerNetwork> {
    let (n, layers, rows) = parse_rows(text, 5)?;
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(rows.len());
    for (line, f) in rows {
        let k = index(&f[0], line, "layer", layers)?;
        let i = index(&f[1], line, "node", n)?;
        let l = index(&f[2], line, "layer", layers)?;
        let j = index(&f[3], line, "node", n)?;
        let w = weight(&f[4], line)?;
        let edge = EdgeKey::new(i, j, k, l);
        check_duplicate(&mut seen, edge, directed, line)?;
        edges.push((edge, w));
    }
    MultilayerNetwork::from_edges(n, layers, directed, edges)
}

/// Serializes intra-layer edges in the multiplex format. Undirected
/// networks list each edge once, with `i < j`.
pub fn write_multiplex(net: &MultiplexNetwork) -> String {
    let mut out = format!("{} {}\n", net.nodes(), net.layer_count());
    for (l, block) in net.layer_blocks().iter().enumerate() {
        for (i, j, w) in block.iter() {
            if net.is_directed() || i < j {
                let _ = writeln!(out, "{} {} {} {}", l + 1, i + 1, j + 1, w);
            }
        }
    }
    out
}

/// Serializes every supra entry in the general format (multiplex coupling
/// becomes explicit inter-layer edges). Undirected networks list each
/// edge once.
pub fn write_multilayer(net: &Network) -> String {
    let n = net.nodes();
    let mut out = format!("{} {}\n", n, net.layers());
    let mut entries = net.supra_entries();
    entries.sort_by_key(|(e, _)| e.tie_key());
    for (e, w) in entries {
        if net.is_directed() || e.source(n) <= e.target(n) {
            let _ = writeln!(out, "{} {} {} {} {}", e.k, e.i, e.l, e.j, w);
        }
    }
    out
}

type Rows = Vec<(usize, Vec<String>)>;

fn parse_rows(text: &str, columns: usize) -> Result<(usize, usize, Rows)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(no, l)| (no + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing header line \"N L\"".into(),
    })?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 2 {
        return Err(Error::Parse {
            line: hline,
            message: format!("header must be \"N L\", got {header:?}"),
        });
    }
    let n = count(h[0], hline, "node count")?;
    let layers = count(h[1], hline, "layer count")?;
    let rows = lines
        .map(|(no, l)| {
            let f: Vec<String> = l.split_whitespace().map(str::to_owned).collect();
            if f.len() != columns {
                Err(Error::Parse {
                    line: no,
                    message: format!("expected {columns} fields, got {}", f.len()),
                })
            } else {
                Ok((no, f))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((n, layers, rows))
}

fn count(s: &str, line: usize, what: &str) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(Error::Parse {
            line,
            message: format!("{what} must be a positive integer, got {s:?}"),
        }),
    }
}

fn index(s: &str, line: usize, what: &'static str, max: usize) -> Result<usize> {
    let v: usize = s.parse().map_err(|_| Error::Parse {
        line,
        message: format!("{what} id must be a positive integer, got {s:?}"),
    })?;
    if v == 0 || v > max {
        return Err(Error::OutOfRange {
            line,
            what,
            value: v,
            max,
        });
    }
    Ok(v)
}

fn weight(s: &str, line: usize) -> Result<f64> {
    let w: f64 = s.parse().map_err(|_| Error::Parse {
        line,
        message: format!("weight must be a number, got {s:?}"),
    })?;
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::NonPositiveWeight { line, weight: w });
    }
    Ok(w)
}

fn check_duplicate(seen: &mut HashSet<EdgeKey>, edge: EdgeKey, directed: bool, line: usize) -> Result<()> {
    let fresh = seen.insert(edge);
    let mirrored = !directed && !edge.is_self_loop() && seen.contains(&edge.reversed());
    if !fresh || mirrored {
        return Err(Error::DuplicateEdge { line, edge });
    }
    Ok(())
}
