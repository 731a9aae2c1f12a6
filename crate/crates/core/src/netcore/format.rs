//! Line-based structural netlist format.
//!
//! ```text
//! # comment
//! cell INV_X1 u1
//! input in0
//! output out0
//! net n1 in0 u1.a
//! net n2 u1.o out0
//! ```
//!
//! Net endpoints are either `inst.pin` or a bare primary-IO name. The first
//! endpoint of every `net` line is the driver; the rest are sinks. Canonical
//! emission sorts instances, IOs and nets lexicographically and sorts each
//! net's sink tail by vertex name (the driver stays first).

use crate::netcore::{CellLibrary, Hyperedge, Hypergraph, Pin, Vertex, VertexKind};
use crate::{Error, Result};

/// Parses a netlist document against a cell library.
pub fn parse_netlist(text: &str, lib: &CellLibrary) -> Result<Hypergraph> {
    let mut h = Hypergraph::new();
    struct PendingNet {
        name: String,
        endpoints: Vec<String>,
        line: usize,
    }
    let mut nets: Vec<PendingNet> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let word = toks.next().unwrap();
        match word {
            "cell" => {
                let cell_name = toks.next().ok_or(Error::Parse {
                    line: lineno,
                    msg: "cell line needs a cell name and an instance name".into(),
                })?;
                let inst = toks.next().ok_or(Error::Parse {
                    line: lineno,
                    msg: "cell line needs an instance name".into(),
                })?;
                let spec = lib
                    .get(cell_name)
                    .ok_or_else(|| Error::UndefinedCell(cell_name.to_string()))?;
                let kind = if spec.is_sequential {
                    VertexKind::Sequential
                } else {
                    VertexKind::Combinational
                };
                h.add_vertex(Vertex {
                    name: inst.to_string(),
                    cell: Some(cell_name.to_string()),
                    kind,
                    width_cpp: spec.width_cpp,
                })?;
            }
            "input" | "output" => {
                let io = toks.next().ok_or(Error::Parse {
                    line: lineno,
                    msg: format!("{word} line needs a name"),
                })?;
                let kind = if word == "input" {
                    VertexKind::PrimaryInput
                } else {
                    VertexKind::PrimaryOutput
                };
                h.add_vertex(Vertex { name: io.to_string(), cell: None, kind, width_cpp: 0 })?;
            }
            "net" => {
                let name = toks.next().ok_or(Error::Parse {
                    line: lineno,
                    msg: "net line needs a name".into(),
                })?;
                let endpoints: Vec<String> = toks.map(str::to_string).collect();
                if endpoints.len() < 2 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("net `{name}` has fewer than 2 pins"),
                    });
                }
                nets.push(PendingNet { name: name.to_string(), endpoints, line: lineno });
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown directive `{word}`"),
                })
            }
        }
    }

    // Nets are resolved after all declarations so declaration order is free.
    for net in nets {
        let mut pins = Vec::with_capacity(net.endpoints.len());
        for ep in &net.endpoints {
            let (vname, pin) = match ep.split_once('.') {
                Some((inst, pin)) => (inst, pin.to_string()),
                None => (ep.as_str(), String::new()),
            };
            let vid = h.vertex_id(vname).ok_or(Error::Parse {
                line: net.line,
                msg: format!("net `{}` references undeclared `{vname}`", net.name),
            })?;
            if pin.is_empty() && !h.vertices[vid].kind.is_primary_io() {
                return Err(Error::Parse {
                    line: net.line,
                    msg: format!("instance endpoint `{vname}` needs a pin (inst.pin)"),
                });
            }
            pins.push(Pin { vertex: vid, pin });
        }
        h.add_edge(net.name, 1.0, pins)?;
    }
    Ok(h)
}

/// Emits the canonical text form of a hypergraph. `parse_netlist` on the
/// result reproduces the graph up to canonical ordering (weights are not part
/// of the file format and read back as 1.0).
pub fn emit_netlist(h: &Hypergraph) -> String {
    let c = h.canonical();
    let mut out = String::new();
    for v in &c.vertices {
        match v.kind {
            VertexKind::PrimaryInput => out.push_str(&format!("input {}\n", v.name)),
            VertexKind::PrimaryOutput => out.push_str(&format!("output {}\n", v.name)),
            _ => {
                let cell = v.cell.as_deref().unwrap_or("UNKNOWN");
                out.push_str(&format!("cell {} {}\n", cell, v.name));
            }
        }
    }
    for e in &c.edges {
        out.push_str(&format!("net {}", e.name));
        for p in &e.pins {
            let v = &c.vertices[p.vertex];
            if p.pin.is_empty() {
                out.push_str(&format!(" {}", v.name));
            } else {
                out.push_str(&format!(" {}.{}", v.name, p.pin));
            }
        }
        out.push('\n');
    }
    out
}

fn endpoint_fmt(h: &Hypergraph, e: &Hyperedge) -> String {
    // Debug helper kept small; nets print as name(driver->sinks).
    let names: Vec<&str> = e.pins.iter().map(|p| h.vertices[p.vertex].name.as_str()).collect();
    format!("{}({})", e.name, names.join(","))
}

#[allow(dead_code)]
pub(crate) fn debug_net(h: &Hypergraph, idx: usize) -> String {
    endpoint_fmt(h, &h.edges[idx])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::LibPreset;

    #[test]
    fn two_cell_netlist() {
        let (lib, _) = LibPreset::Lib2.load();
        let text = "cell INV_X1 u1\ncell INV_X1 u2\nnet n1 u1.o u2.a\n";
        let h = parse_netlist(text, &lib).unwrap();
        assert_eq!(h.n_vertices(), 2);
        assert_eq!(h.edges.len(), 1);
    }

    #[test]
    fn undefined_cell_rejected() {
        let (lib, _) = LibPreset::Lib2.load();
        let err = parse_netlist("cell FOO u1\n", &lib).unwrap_err();
        assert!(matches!(err, Error::UndefinedCell(name) if name == "FOO"));
    }

    #[test]
    fn short_net_rejected() {
        let (lib, _) = LibPreset::Lib2.load();
        let err = parse_netlist("cell INV_X1 u1\nnet n1 u1.o\n", &lib).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn syntax_error_carries_line() {
        let (lib, _) = LibPreset::Lib2.load();
        let err = parse_netlist("cell INV_X1 u1\nbogus line here\n", &lib).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn io_endpoints_parse() {
        let (lib, _) = LibPreset::Lib2.load();
        let text = "cell INV_X1 u1\ninput a\noutput z\nnet na a u1.a\nnet nz u1.o z\n";
        let h = parse_netlist(text, &lib).unwrap();
        assert_eq!(h.n_prim(), 2);
        assert_eq!(h.n_inst(), 1);
    }
}
