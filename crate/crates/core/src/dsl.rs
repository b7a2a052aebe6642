//! Text format for graphs and graph maps.
//!
//! ```text
//! # the plastic number map
//! edges: a, b, c
//! map f: a -> b; b -> c; c -> a b
//! ```
//!
//! Non-rose graphs declare vertices and oriented edges:
//!
//! ```text
//! vertices: u, w
//! edge a: u -> w
//! edge b: w -> u
//! map g:
//!   a -> a b a
//!   b -> b a b
//! fixed-vertex: u
//! ```
//!
//! Uppercase letters denote inverse edges. Images are separated by `;` or
//! newlines and may continue over several lines after `map <name>:`.

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::map::GraphMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapFile {
    pub name: String,
    pub map: GraphMap,
    pub fixed_vertex: Option<Vertex>,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Whitespace or comma separated tokens with their 1-based columns.
fn tokens(text: &str, col0: usize, commas: bool) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        let sep = c.is_whitespace() || (commas && c == ',');
        match (sep, start) {
            (true, Some(s)) => {
                out.push((col0 + s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((col0 + s, &text[s..]));
    }
    out
}

struct Clause {
    line: usize,
    col: usize,
    text: String,
}

pub fn parse_map_file(text: &str) -> Result<MapFile> {
    let mut edge_list: Option<Vec<(usize, usize, String)>> = None;
    let mut vertices: Vec<(usize, usize, String)> = Vec::new();
    let mut edge_decls: Vec<(usize, usize, String, String, String)> = Vec::new();
    let mut name: Option<String> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut fixed: Option<(usize, usize, String)> = None;
    let mut in_map = false;

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.len() - trimmed.len();
        let col = indent + 1;
        let keyword = |k: &str| trimmed.strip_prefix(k).map(|r| (r, col + k.len()));
        if let Some((rest, c)) = keyword("edges:") {
            in_map = false;
            let list = edge_list.get_or_insert_with(Vec::new);
            for (tc, t) in tokens(rest, c, true) {
                list.push((line, tc, t.to_string()));
            }
        } else if let Some((rest, c)) = keyword("vertices:") {
            in_map = false;
            for (tc, t) in tokens(rest, c, true) {
                vertices.push((line, tc, t.to_string()));
            }
        } else if let Some((rest, c)) = keyword("vertex ") {
            in_map = false;
            for (tc, t) in tokens(rest, c, true) {
                vertices.push((line, tc, t.to_string()));
            }
        } else if let Some((rest, c)) = keyword("edge ") {
            in_map = false;
            let (lhs, rhs) = rest.split_once(':').ok_or_else(|| err(line, c, "expected `edge <name>: <u> -> <v>`"))?;
            let (u, v) = rhs.split_once("->").ok_or_else(|| err(line, c + lhs.len() + 1, "expected `->`"))?;
            edge_decls.push((line, c, lhs.trim().to_string(), u.trim().to_string(), v.trim().to_string()));
        } else if let Some((rest, c)) = keyword("fixed-vertex:") {
            in_map = false;
            let v = rest.trim();
            if v.is_empty() {
                return Err(err(line, c, "missing vertex name"));
            }
            fixed = Some((line, c + rest.len() - rest.trim_start().len(), v.to_string()));
        } else if let Some((rest, c)) = keyword("map ") {
            if name.is_some() {
                return Err(err(line, col, "more than one map"));
            }
            let (n, images) = rest.split_once(':').ok_or_else(|| err(line, c, "expected `map <name>:`"))?;
            let n = n.trim();
            if n.is_empty() {
                return Err(err(line, c, "missing map name"));
            }
            name = Some(n.to_string());
            in_map = true;
            let ic = c + n.len() + rest.find(':').unwrap() - n.len() + 1;
            push_clauses(&mut clauses, images, line, ic);
        } else if in_map {
            push_clauses(&mut clauses, body, line, 1);
        } else {
            let word: String = trimmed.chars().take_while(|c| !c.is_whitespace()).collect();
            return Err(err(line, col, format!("unexpected `{word}`")));
        }
    }

    let name = name.ok_or_else(|| err(text.lines().count().max(1), 1, "missing `map <name>:` declaration"))?;
    let graph = build_graph(edge_list, &vertices, &edge_decls)?;
    let n = graph.num_edges() / 2;
    let mut images: Vec<Option<Vec<Edge>>> = vec![None; n];
    for cl in &clauses {
        let (lhs, rhs) = cl.text.split_once("->").ok_or_else(|| err(cl.line, cl.col, "expected `letter -> letters`"))?;
        let lt = lhs.trim();
        let lcol = cl.col + lhs.len() - lhs.trim_start().len();
        let e = graph.edge_by_name(lt).ok_or_else(|| err(cl.line, lcol, format!("undeclared letter `{}`", lt.to_lowercase())))?;
        if e % 2 == 1 {
            return Err(err(cl.line, lcol, format!("image must be given for the positive edge `{}`", lt.to_lowercase())));
        }
        let slot = &mut images[(e >> 1) as usize];
        if slot.is_some() {
            return Err(err(cl.line, lcol, format!("second image for `{lt}`")));
        }
        let rcol = cl.col + lhs.len() + 2;
        let mut word = Vec::new();
        for (tc, t) in tokens(rhs, rcol, false) {
            let w = graph.parse_word(t).map_err(|e| match e {
                Error::UnknownEdge(x) => {
                    let off = t.find(|c: char| c.to_lowercase().to_string() == x).unwrap_or(0);
                    err(cl.line, tc + off, format!("undeclared letter `{x}`"))
                }
                other => other,
            })?;
            word.extend(w);
        }
        if word.is_empty() {
            return Err(err(cl.line, rcol, format!("image of `{lt}` is empty")));
        }
        *slot = Some(word);
    }
    let mut positive = Vec::with_capacity(n);
    for (i, img) in images.into_iter().enumerate() {
        match img {
            Some(w) => positive.push(w),
            None => {
                return Err(err(
                    text.lines().count().max(1),
                    1,
                    format!("no image for `{}`", graph.edge_name(2 * i as Edge)),
                ))
            }
        }
    }
    let map = GraphMap::new(graph, positive)?;
    let fixed_vertex = match fixed {
        None => None,
        Some((line, col, v)) => Some(
            map.graph().vertex_by_name(&v).ok_or_else(|| err(line, col, format!("undeclared vertex `{v}`")))?,
        ),
    };
    Ok(MapFile { name, map, fixed_vertex })
}

fn push_clauses(out: &mut Vec<Clause>, text: &str, line: usize, col0: usize) {
    let mut offset = 0;
    for part in text.split(';') {
        let lead = part.len() - part.trim_start().len();
        if !part.trim().is_empty() {
            out.push(Clause { line, col: col0 + offset + lead, text: part.trim_start().to_string() });
        }
        offset += part.len() + 1;
    }
}

type EdgeDecl = (usize, usize, String, String, String);

fn build_graph(
    edge_list: Option<Vec<(usize, usize, String)>>,
    vertices: &[(usize, usize, String)],
    decls: &[EdgeDecl],
) -> Result<Graph> {
    if decls.is_empty() {
        let list = edge_list.ok_or_else(|| err(1, 1, "missing `edges:` declaration"))?;
        if !vertices.is_empty() && vertices.len() != 1 {
            let (l, c, _) = &vertices[1];
            return Err(err(*l, *c, "a graph without `edge` lines is a rose with one vertex"));
        }
        let vname = vertices.first().map_or("v".to_string(), |v| v.2.clone());
        let edges = list.iter().map(|(_, _, n)| (n.clone(), 0, 0)).collect();
        return Graph::new(vec![vname], edges).map_err(|e| at_first(&list, e));
    }
    let vnames: Vec<String> = vertices.iter().map(|v| v.2.clone()).collect();
    if vnames.is_empty() {
        let (l, c, ..) = &decls[0];
        return Err(err(*l, *c, "`edge` lines need `vertices:`"));
    }
    let vertex = |l: usize, c: usize, n: &str| {
        vnames
            .iter()
            .position(|v| v == n)
            .map(|i| i as Vertex)
            .ok_or_else(|| err(l, c, format!("undeclared vertex `{n}`")))
    };
    let mut edges = Vec::new();
    for (l, c, n, u, v) in decls {
        edges.push((n.clone(), vertex(*l, *c, u)?, vertex(*l, *c, v)?));
    }
    if let Some(list) = &edge_list {
        for (l, c, n) in list {
            if !decls.iter().any(|d| &d.2 == n) {
                return Err(err(*l, *c, format!("edge `{n}` has no `edge {n}: u -> v` line")));
            }
        }
    }
    Graph::new(vnames, edges).map_err(|e| match e {
        Error::InvalidGraph(m) => err(decls[0].0, decls[0].1, m),
        other => other,
    })
}

fn at_first(list: &[(usize, usize, String)], e: Error) -> Error {
    match e {
        Error::InvalidGraph(m) => {
            let (l, c) = list.first().map_or((1, 1), |x| (x.0, x.1));
            err(l, c, m)
        }
        other => other,
    }
}

/// Renders a map in the text format.
pub fn format_map_file(name: &str, f: &GraphMap, fixed_vertex: Option<Vertex>) -> String {
    let g = f.graph();
    let mut out = String::new();
    let names: Vec<String> = g.positive_edges().map(|e| g.edge_name(e)).collect();
    if g.is_rose() && fixed_vertex.is_none() {
        out.push_str(&format!("edges: {}\n", names.join(", ")));
    } else {
        let vs: Vec<&str> = (0..g.num_vertices() as Vertex).map(|v| g.vertex_name(v)).collect();
        out.push_str(&format!("vertices: {}\n", vs.join(", ")));
        for e in g.positive_edges() {
            out.push_str(&format!("edge {}: {} -> {}\n", g.edge_name(e), g.vertex_name(g.origin(e)), g.vertex_name(g.terminus(e))));
        }
    }
    out.push_str(&format!("map {name}:\n"));
    for e in g.positive_edges() {
        let img: Vec<String> = f.image(e).iter().map(|&x| g.edge_name(x)).collect();
        out.push_str(&format!("  {} -> {}\n", g.edge_name(e), img.join(" ")));
    }
    if let Some(v) = fixed_vertex {
        out.push_str(&format!("fixed-vertex: {}\n", g.vertex_name(v)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_rose() {
        let m = parse_map_file("edges: a, b\nmap f: a -> a b; b -> a").unwrap();
        assert_eq!(m.name, "f");
        assert!(m.map.graph().is_rose());
        assert_eq!(m.map.display(), "a -> ab; b -> a");
        assert_eq!(m.fixed_vertex, None);
    }

    #[test]
    fn multiline_and_comments() {
        let text = "# plastic\nedges: a, b, c\nmap p:\n  a -> b   # first\n  b -> c\n  c -> ab\n";
        let m = parse_map_file(text).unwrap();
        assert_eq!(m.map.display(), "a -> b; b -> c; c -> ab");
    }

    #[test]
    fn undeclared_letter_is_named() {
        let e = parse_map_file("edges: a, b\nmap f: a -> a c; b -> a").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, col: 15, msg: "undeclared letter `c`".into() });
        let e = parse_map_file("edges: a, b\nmap f: a -> a; C -> a").unwrap_err();
        assert!(e.to_string().contains("`c`"), "{e}");
    }

    #[test]
    fn unreduced_image_is_irregular() {
        let e = parse_map_file("edges: a, b\nmap f: a -> a A b; b -> a").unwrap_err();
        assert!(matches!(e, Error::NotRegular(_)), "{e}");
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_map_file("edges: a\nfoo bar\nmap f: a -> a").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, col: 1, msg: "unexpected `foo`".into() });
        let e = parse_map_file("edges: a, b\nmap f: a -> b; b a").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, col: 16, msg: "expected `letter -> letters`".into() });
        assert!(parse_map_file("edges: a, b\nmap f: a -> b").is_err());
        assert!(parse_map_file("edges: a\n").is_err());
    }

    #[test]
    fn general_graph_with_fixed_vertex() {
        let text = "vertices: u, w\nedge a: u -> w\nedge b: w -> u\nedge c: u -> w\nmap g:\n  a -> a b c\n  b -> b a b\n  c -> a\nfixed-vertex: u\n";
        let m = parse_map_file(text).unwrap();
        assert_eq!(m.map.graph().num_vertices(), 2);
        assert_eq!(m.fixed_vertex, Some(0));
        let back = parse_map_file(&format_map_file("g", &m.map, m.fixed_vertex)).unwrap();
        assert_eq!(back, m);
        let e = parse_map_file("vertices: u\nedge a: u -> x\nmap g: a -> a").unwrap_err();
        assert!(e.to_string().contains("undeclared vertex `x`"));
    }

    #[test]
    fn round_trip_rose() {
        let m = parse_map_file("edges: a, b, c\nmap p: a -> b; b -> c; c -> a b").unwrap();
        assert_eq!(parse_map_file(&format_map_file("p", &m.map, None)).unwrap(), m);
    }
}
