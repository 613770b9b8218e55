//! Line-oriented text formats for graphs, Pólya weights and Pólya-point
//! trees, plus the small CSV tables the CLI emits.
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces the values bit for bit.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use polya_contact_core::graphgen::PolyaWeights;
use polya_contact_core::locallimit::{NodeType, PPNode, PolyaPointTree};
use polya_contact_core::{MultiGraph, Tree};

use crate::error::{Error, Result};

/// Model metadata carried in file headers. Fields other than `n` are
/// optional so that hand-made graphs can be stored too.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Header {
    pub n: usize,
    pub m: Option<u32>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
}

impl Header {
    fn fields(&self) -> String {
        let mut s = format!("n={}", self.n);
        if let Some(m) = self.m {
            let _ = write!(s, " m={m}");
        }
        if let Some(a) = self.alpha {
            let _ = write!(s, " alpha={a}");
        }
        if let Some(seed) = self.seed {
            let _ = write!(s, " seed={seed}");
        }
        s
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

struct Lines<'a> {
    source: &'a str,
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str, source: &'a str) -> Self {
        Lines { source, inner: text.lines().enumerate() }
    }

    fn error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse { path: self.source.to_string(), line, message: message.into() }
    }

    /// Next non-blank line with its 1-based number.
    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        self.inner.by_ref().map(|(i, l)| (i + 1, l.trim())).find(|(_, l)| !l.is_empty())
    }
}

fn parse_field<T: std::str::FromStr>(lines: &Lines, line: usize, token: &str, what: &str) -> Result<T> {
    token.parse().map_err(|_| lines.error(line, format!("invalid {what} `{token}`")))
}

/// Parses `MAGIC v1 key=value ...` and returns the key/value pairs.
fn parse_header<'a>(lines: &mut Lines<'a>, magic: &str) -> Result<(usize, HashMap<&'a str, &'a str>)> {
    let (no, line) = lines.next_line().ok_or_else(|| lines.error(1, "empty file"))?;
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some(magic) || tokens.next() != Some("v1") {
        return Err(lines.error(no, format!("expected `{magic} v1` header")));
    }
    let mut map = HashMap::new();
    for t in tokens {
        let (k, v) = t.split_once('=').ok_or_else(|| lines.error(no, format!("malformed header field `{t}`")))?;
        map.insert(k, v);
    }
    Ok((no, map))
}

fn header_from(lines: &Lines, no: usize, map: &HashMap<&str, &str>) -> Result<Header> {
    let n = map.get("n").ok_or_else(|| lines.error(no, "header lacks n="))?;
    Ok(Header {
        n: parse_field(lines, no, n, "n")?,
        m: map.get("m").map(|v| parse_field(lines, no, v, "m")).transpose()?,
        alpha: map.get("alpha").map(|v| parse_field(lines, no, v, "alpha")).transpose()?,
        seed: map.get("seed").map(|v| parse_field(lines, no, v, "seed")).transpose()?,
    })
}

/// `PAGRAPH v1 n=.. m=.. alpha=.. seed=..` followed by one `j k mult`
/// line per edge, 1-based with `j < k`, sorted.
pub fn format_graph(graph: &MultiGraph, header: &Header) -> String {
    let mut s = String::with_capacity(16 * graph.edges().len() + 64);
    let _ = writeln!(s, "PAGRAPH v1 {}", Header { n: graph.vertex_count(), ..header.clone() }.fields());
    for e in graph.edges() {
        let _ = writeln!(s, "{} {} {}", e.u + 1, e.v + 1, e.multiplicity);
    }
    s
}

pub fn parse_graph(text: &str, source: &str) -> Result<(Header, MultiGraph)> {
    let mut lines = Lines::new(text, source);
    let (no, map) = parse_header(&mut lines, "PAGRAPH")?;
    let header = header_from(&lines, no, &map)?;
    let mut edges = Vec::new();
    let mut prev = (0usize, 0usize);
    while let Some((no, line)) = lines.next_line() {
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 3 {
            return Err(lines.error(no, "expected `j k mult`"));
        }
        let j: usize = parse_field(&lines, no, t[0], "vertex")?;
        let k: usize = parse_field(&lines, no, t[1], "vertex")?;
        let mult: u32 = parse_field(&lines, no, t[2], "multiplicity")?;
        if !(1 <= j && j < k && k <= header.n) {
            return Err(lines.error(no, format!("edge {j} {k} invalid for n={}", header.n)));
        }
        if mult == 0 {
            return Err(lines.error(no, "multiplicity must be positive"));
        }
        if (j, k) <= prev {
            return Err(lines.error(no, "edges must be sorted and distinct"));
        }
        prev = (j, k);
        edges.push((j - 1, k - 1, mult));
    }
    let graph = MultiGraph::from_edges(header.n, edges)?;
    Ok((header, graph))
}

pub fn read_graph(path: &Path) -> Result<(Header, MultiGraph)> {
    parse_graph(&read_text(path)?, &path.display().to_string())
}

/// `PAWEIGHTS v1 n=.. m=.. alpha=.. seed=..` followed by `psi_1..psi_n`,
/// one per line.
pub fn format_weights(weights: &PolyaWeights, header: &Header) -> String {
    let mut s = String::with_capacity(24 * weights.n() + 64);
    let _ = writeln!(s, "PAWEIGHTS v1 {}", Header { n: weights.n(), ..header.clone() }.fields());
    for &p in weights.psi_values() {
        let _ = writeln!(s, "{p:e}");
    }
    s
}

pub fn parse_weights(text: &str, source: &str) -> Result<(Header, PolyaWeights)> {
    let mut lines = Lines::new(text, source);
    let (no, map) = parse_header(&mut lines, "PAWEIGHTS")?;
    let header = header_from(&lines, no, &map)?;
    let mut psi = Vec::with_capacity(header.n);
    while let Some((no, line)) = lines.next_line() {
        psi.push(parse_field::<f64>(&lines, no, line, "weight")?);
    }
    if psi.len() != header.n {
        return Err(lines.error(no, format!("header says n={} but {} weights follow", header.n, psi.len())));
    }
    Ok((header, PolyaWeights::from_psi(&psi)?))
}

pub fn read_weights(path: &Path) -> Result<(Header, PolyaWeights)> {
    parse_weights(&read_text(path)?, &path.display().to_string())
}

/// Metadata of a stored Pólya-point tree.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeHeader {
    pub m: u32,
    pub alpha: f64,
    pub depth: usize,
    pub degree_cap: u64,
    pub seed: Option<u64>,
}

fn format_path(path: &[u32]) -> String {
    if path.is_empty() {
        return "-".to_string();
    }
    path.iter().map(u32::to_string).collect::<Vec<_>>().join(".")
}

/// `PPTREE v1 m=.. alpha=.. depth=.. cap=.. [seed=..]` followed by one
/// `path x type gamma truncated` line per node in breadth-first order; the
/// root's path is `-`, other paths are dot-separated child indices.
pub fn format_tree(tree: &PolyaPointTree, header: &TreeHeader) -> String {
    let mut s = String::with_capacity(48 * tree.len() + 64);
    let _ = write!(s, "PPTREE v1 m={} alpha={} depth={} cap={}", header.m, header.alpha, header.depth, header.degree_cap);
    if let Some(seed) = header.seed {
        let _ = write!(s, " seed={seed}");
    }
    s.push('\n');
    for (i, mark) in tree.marks.iter().enumerate() {
        let _ = writeln!(
            s,
            "{} {:e} {} {:e} {}",
            format_path(&tree.tree.path(i)),
            mark.x,
            mark.node_type.as_str(),
            mark.gamma,
            u8::from(tree.tree.node(i).truncated)
        );
    }
    s
}

pub fn parse_tree(text: &str, source: &str) -> Result<(TreeHeader, PolyaPointTree)> {
    let mut lines = Lines::new(text, source);
    let (no, map) = parse_header(&mut lines, "PPTREE")?;
    let get = |k: &str| map.get(k).copied().ok_or_else(|| lines.error(no, format!("header lacks {k}=")));
    let header = TreeHeader {
        m: parse_field(&lines, no, get("m")?, "m")?,
        alpha: parse_field(&lines, no, get("alpha")?, "alpha")?,
        depth: parse_field(&lines, no, get("depth")?, "depth")?,
        degree_cap: parse_field(&lines, no, get("cap")?, "cap")?,
        seed: map.get("seed").map(|v| parse_field(&lines, no, v, "seed")).transpose()?,
    };

    let mut paths: Vec<Vec<u32>> = Vec::new();
    let mut marks = Vec::new();
    let mut flags = Vec::new();
    let mut line_numbers = Vec::new();
    while let Some((no, line)) = lines.next_line() {
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 5 {
            return Err(lines.error(no, "expected `path x type gamma truncated`"));
        }
        let path = if t[0] == "-" {
            Vec::new()
        } else {
            t[0].split('.').map(|p| parse_field(&lines, no, p, "path index")).collect::<Result<Vec<u32>>>()?
        };
        let node_type: NodeType = t[2].parse().map_err(|_| lines.error(no, format!("unknown node type `{}`", t[2])))?;
        let m_v = if node_type == NodeType::R { header.m.saturating_sub(1) } else { header.m };
        let truncated = match t[4] {
            "0" => false,
            "1" => true,
            other => return Err(lines.error(no, format!("truncated flag must be 0 or 1, got `{other}`"))),
        };
        marks.push(PPNode {
            x: parse_field(&lines, no, t[1], "position")?,
            node_type,
            gamma: parse_field(&lines, no, t[3], "gamma")?,
            m_v,
        });
        paths.push(path);
        flags.push(truncated);
        line_numbers.push(no);
    }
    if paths.first().is_none_or(|p| !p.is_empty()) {
        return Err(lines.error(no + 1, "first node must be the root `-`"));
    }
    let mut counts = vec![0u32; paths.len()];
    let index: HashMap<&[u32], usize> = paths.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    for (i, p) in paths.iter().enumerate().skip(1) {
        let parent = index
            .get(&p[..p.len() - 1])
            .ok_or_else(|| lines.error(line_numbers[i], "parent node missing"))?;
        counts[*parent] += 1;
    }
    let shape: Vec<(u32, bool)> = counts.into_iter().zip(flags).collect();
    let tree = Tree::from_child_counts(header.depth, &shape)?;
    for (i, p) in paths.iter().enumerate() {
        if tree.path(i) != *p {
            return Err(lines.error(line_numbers[i], "nodes are not in breadth-first order"));
        }
    }
    Ok((header, PolyaPointTree::from_parts(tree, marks)?))
}

pub fn read_tree(path: &Path) -> Result<(TreeHeader, PolyaPointTree)> {
    parse_tree(&read_text(path)?, &path.display().to_string())
}

/// `time,infected_count` rows.
pub fn trajectory_csv(observations: &[(f64, usize)]) -> String {
    let mut s = String::from("time,infected_count\n");
    for (t, c) in observations {
        let _ = writeln!(s, "{t},{c}");
    }
    s
}

/// `degree,count` rows for the non-empty degree classes.
pub fn histogram_csv(histogram: &[u64]) -> String {
    let mut s = String::from("degree,count\n");
    for (d, &c) in histogram.iter().enumerate().filter(|(_, &c)| c > 0) {
        let _ = writeln!(s, "{d},{c}");
    }
    s
}
