//! The tower file format: a line-oriented grammar with per-line
//! diagnostics, the canonical serializer, gram-matrix files, and DOT
//! export.
//!
//! ```text
//! twr 1
//! lengths l1 l2 l3
//! graph K
//!   vertex k0 k1
//!   edge a k0 -- k1 len l1
//! map f G -> K
//!   vertex g0 -> k0
//!   edge e0 -> a deg 2 same
//! cover pi over G dashed e3
//! tower T = pi ; f
//! ```
//!
//! `same` maps the half-edge at the first declared endpoint to the
//! target's first declared endpoint, `flip` to the second; this is needed
//! because parallel edges make endpoint inference ambiguous. `len auto`
//! computes the length from the unique outgoing map.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::harmonic::{derive_iota, signed_cover, Morphism, Tower};
use crate::intlat::GramMatrix;
use crate::symgraph::{Graph, LinearForm, Vars, CONST_VAR};

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Severity {
    #[serde(rename = "error")]
    Error,
    #[serde(rename = "warning")]
    Warning,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub line: usize,
    pub col: usize,
}

impl Diagnostic {
    fn error(message: impl Into<String>, line: usize, col: usize) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            line,
            col,
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {}: {}", self.line, self.col, sev, self.message)
    }
}

/// A parsed and validated tower together with its variable registry and
/// the declared names (used to serialize it back).
#[derive(Debug, Clone)]
pub struct TowerFile {
    pub vars: Vars,
    pub tower: Tower,
    pub tower_name: String,
    pub base_name: String,
    pub mid_name: String,
    pub top_name: String,
}

// ---------------------------------------------------------------------------
// tokenizer

#[derive(Debug, Clone)]
struct Tok {
    text: String,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Tok> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in body.char_indices().chain([(body.len(), ' ')]) {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok {
                    text: body[s..i].to_string(),
                    col: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// declarations gathered in the first pass

#[derive(Debug, Clone)]
enum LenSpec {
    Var(String),
    Rat(BigRational),
    Auto,
}

#[derive(Debug)]
struct EdgeDecl {
    name: String,
    v1: String,
    v2: String,
    len: LenSpec,
    line: usize,
    col: usize,
}

#[derive(Debug)]
struct GraphDecl {
    name: String,
    #[allow(dead_code)]
    line: usize,
    vertices: Vec<(String, usize, usize)>,
    edges: Vec<EdgeDecl>,
}

#[derive(Debug)]
struct MapDecl {
    name: String,
    src: String,
    dst: String,
    line: usize,
    col: usize,
    vents: Vec<(String, String, usize, usize)>,
    eents: Vec<(String, String, u32, bool, usize, usize)>, // (src, dst, deg, flip)
}

#[derive(Debug)]
struct CoverDecl {
    name: String,
    over: String,
    dashed: Vec<(String, usize, usize)>,
    line: usize,
    col: usize,
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = q.parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(BigRational::new(p, q))
    } else {
        let p: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(p))
    }
}

// ---------------------------------------------------------------------------
// the parser

pub fn parse_tower(text: &str) -> Result<TowerFile, Vec<Diagnostic>> {
    let mut diags: Vec<Diagnostic> = Vec::new();
    let mut vars = Vars::new();
    let mut declared_lengths: BTreeSet<String> = BTreeSet::new();
    let mut graphs: Vec<GraphDecl> = Vec::new();
    let mut maps: Vec<MapDecl> = Vec::new();
    let mut covers: Vec<CoverDecl> = Vec::new();
    let mut tower_stmt: Option<(String, String, String, usize)> = None;
    let mut saw_header = false;

    enum Section {
        None,
        Graph(usize),
        Map(usize),
    }
    let mut section = Section::None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        let head = toks[0].text.as_str();
        if !saw_header {
            if head == "twr" && toks.len() == 2 && toks[1].text == "1" {
                saw_header = true;
                continue;
            }
            diags.push(Diagnostic::error(
                "expected header `twr 1`",
                line,
                toks[0].col,
            ));
            return Err(diags);
        }
        match head {
            "lengths" => {
                section = Section::None;
                for t in &toks[1..] {
                    vars.declare(&t.text);
                    declared_lengths.insert(t.text.clone());
                }
            }
            "graph" => {
                if toks.len() != 2 {
                    diags.push(Diagnostic::error(
                        "expected `graph <Name>`",
                        line,
                        toks[0].col,
                    ));
                    continue;
                }
                if graphs.iter().any(|g| g.name == toks[1].text) {
                    diags.push(Diagnostic::error(
                        format!("graph {} is declared twice", toks[1].text),
                        line,
                        toks[1].col,
                    ));
                }
                graphs.push(GraphDecl {
                    name: toks[1].text.clone(),
                    line,
                    vertices: Vec::new(),
                    edges: Vec::new(),
                });
                section = Section::Graph(graphs.len() - 1);
            }
            "map" => {
                // map <name> <Src> -> <Dst>
                if toks.len() != 5 || toks[3].text != "->" {
                    diags.push(Diagnostic::error(
                        "expected `map <name> <Src> -> <Dst>`",
                        line,
                        toks[0].col,
                    ));
                    continue;
                }
                maps.push(MapDecl {
                    name: toks[1].text.clone(),
                    src: toks[2].text.clone(),
                    dst: toks[4].text.clone(),
                    line,
                    col: toks[0].col,
                    vents: Vec::new(),
                    eents: Vec::new(),
                });
                section = Section::Map(maps.len() - 1);
            }
            "cover" => {
                // cover <name> over <Graph> dashed <edge>...
                section = Section::None;
                if toks.len() < 4 || toks[2].text != "over" {
                    diags.push(Diagnostic::error(
                        "expected `cover <name> over <Graph> dashed <edge>...`",
                        line,
                        toks[0].col,
                    ));
                    continue;
                }
                let mut dashed = Vec::new();
                if toks.len() > 4 {
                    if toks[4].text != "dashed" {
                        diags.push(Diagnostic::error("expected `dashed`", line, toks[4].col));
                        continue;
                    }
                    for t in &toks[5..] {
                        dashed.push((t.text.clone(), line, t.col));
                    }
                }
                covers.push(CoverDecl {
                    name: toks[1].text.clone(),
                    over: toks[3].text.clone(),
                    dashed,
                    line,
                    col: toks[0].col,
                });
            }
            "tower" => {
                // tower <name> = <top> ; <bottom>
                section = Section::None;
                if toks.len() != 6 || toks[2].text != "=" || toks[4].text != ";" {
                    diags.push(Diagnostic::error(
                        "expected `tower <name> = <cover-or-map> ; <map>`",
                        line,
                        toks[0].col,
                    ));
                    continue;
                }
                if tower_stmt.is_some() {
                    diags.push(Diagnostic::error(
                        "only one tower statement is allowed",
                        line,
                        toks[0].col,
                    ));
                    continue;
                }
                tower_stmt = Some((
                    toks[1].text.clone(),
                    toks[3].text.clone(),
                    toks[5].text.clone(),
                    line,
                ));
            }
            "vertex" => match section {
                Section::Graph(g) => {
                    for t in &toks[1..] {
                        graphs[g].vertices.push((t.text.clone(), line, t.col));
                    }
                }
                Section::Map(m) => {
                    // vertex <a> -> <b>
                    if toks.len() != 4 || toks[2].text != "->" {
                        diags.push(Diagnostic::error(
                            "expected `vertex <id> -> <id>`",
                            line,
                            toks[0].col,
                        ));
                        continue;
                    }
                    maps[m].vents.push((
                        toks[1].text.clone(),
                        toks[3].text.clone(),
                        line,
                        toks[1].col,
                    ));
                }
                Section::None => {
                    diags.push(Diagnostic::error(
                        "`vertex` outside graph or map",
                        line,
                        toks[0].col,
                    ));
                }
            },
            "edge" => match section {
                Section::Graph(g) => {
                    // edge <id> <v1> -- <v2> len <spec>
                    if toks.len() != 7 || toks[3].text != "--" || toks[5].text != "len" {
                        diags.push(Diagnostic::error(
                            "expected `edge <id> <v1> -- <v2> len <var|p/q|auto>`",
                            line,
                            toks[0].col,
                        ));
                        continue;
                    }
                    let spec = &toks[6].text;
                    let len = if spec == "auto" {
                        LenSpec::Auto
                    } else if declared_lengths.contains(spec) {
                        LenSpec::Var(spec.clone())
                    } else if let Some(q) = parse_rational(spec) {
                        if !q.is_positive() {
                            diags.push(Diagnostic::error(
                                "length must be positive",
                                line,
                                toks[6].col,
                            ));
                            continue;
                        }
                        LenSpec::Rat(q)
                    } else {
                        diags.push(Diagnostic::error(
                            format!("unknown length `{spec}` (not declared in `lengths` and not a rational)"),
                            line,
                            toks[6].col,
                        ));
                        continue;
                    };
                    graphs[g].edges.push(EdgeDecl {
                        name: toks[1].text.clone(),
                        v1: toks[2].text.clone(),
                        v2: toks[4].text.clone(),
                        len,
                        line,
                        col: toks[1].col,
                    });
                }
                Section::Map(m) => {
                    // edge <e> -> <e'> deg <k> <same|flip>
                    if toks.len() != 7 || toks[2].text != "->" || toks[4].text != "deg" {
                        diags.push(Diagnostic::error(
                            "expected `edge <id> -> <id> deg <k> <same|flip>`",
                            line,
                            toks[0].col,
                        ));
                        continue;
                    }
                    let deg: u32 = match toks[5].text.parse() {
                        Ok(d) => d,
                        Err(_) => {
                            diags.push(Diagnostic::error(
                                "degree must be a number",
                                line,
                                toks[5].col,
                            ));
                            continue;
                        }
                    };
                    if deg == 0 {
                        diags.push(Diagnostic::error(
                            "degree must be positive",
                            line,
                            toks[5].col,
                        ));
                        continue;
                    }
                    let flip = match toks[6].text.as_str() {
                        "same" => false,
                        "flip" => true,
                        _ => {
                            diags.push(Diagnostic::error(
                                "expected `same` or `flip`",
                                line,
                                toks[6].col,
                            ));
                            continue;
                        }
                    };
                    maps[m].eents.push((
                        toks[1].text.clone(),
                        toks[3].text.clone(),
                        deg,
                        flip,
                        line,
                        toks[1].col,
                    ));
                }
                Section::None => {
                    diags.push(Diagnostic::error(
                        "`edge` outside graph or map",
                        line,
                        toks[0].col,
                    ));
                }
            },
            other => {
                diags.push(Diagnostic::error(
                    format!("unknown keyword `{other}`"),
                    line,
                    toks[0].col,
                ));
            }
        }
    }
    if !saw_header {
        diags.push(Diagnostic::error("missing header `twr 1`", 1, 1));
        return Err(diags);
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    // build the declared graphs
    let mut built: HashMap<String, Graph> = HashMap::new();
    let mut lenspecs: HashMap<String, Vec<LenSpec>> = HashMap::new();
    for g in &graphs {
        let mut vnames = Vec::new();
        let mut vindex = HashMap::new();
        for (name, line, col) in &g.vertices {
            if vindex.insert(name.clone(), vnames.len()).is_some() {
                diags.push(Diagnostic::error(
                    format!("vertex {name} declared twice"),
                    *line,
                    *col,
                ));
                continue;
            }
            vnames.push(name.clone());
        }
        let mut edges = Vec::new();
        let mut specs = Vec::new();
        let mut enames = BTreeSet::new();
        for e in &g.edges {
            if !enames.insert(e.name.clone()) {
                diags.push(Diagnostic::error(
                    format!("edge {} declared twice", e.name),
                    e.line,
                    e.col,
                ));
                continue;
            }
            let Some(&a) = vindex.get(&e.v1) else {
                diags.push(Diagnostic::error(
                    format!("unknown vertex {}", e.v1),
                    e.line,
                    e.col,
                ));
                continue;
            };
            let Some(&b) = vindex.get(&e.v2) else {
                diags.push(Diagnostic::error(
                    format!("unknown vertex {}", e.v2),
                    e.line,
                    e.col,
                ));
                continue;
            };
            edges.push((a, b, e.name.clone()));
            specs.push(e.len.clone());
        }
        if diags.is_empty() {
            built.insert(g.name.clone(), Graph::build(vnames, edges));
            lenspecs.insert(g.name.clone(), specs);
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    // build the declared maps
    struct BuiltMap {
        src: String,
        dst: String,
        morphism: Morphism,
        line: usize,
    }
    let mut built_maps: HashMap<String, BuiltMap> = HashMap::new();
    for m in &maps {
        let Some(src) = built.get(&m.src) else {
            diags.push(Diagnostic::error(
                format!("unknown graph {}", m.src),
                m.line,
                m.col,
            ));
            continue;
        };
        let Some(dst) = built.get(&m.dst) else {
            diags.push(Diagnostic::error(
                format!("unknown graph {}", m.dst),
                m.line,
                m.col,
            ));
            continue;
        };
        let mut vmap = vec![usize::MAX; src.n_vertices()];
        for (a, b, line, col) in &m.vents {
            let Some(va) = src.vertex_by_name(a) else {
                diags.push(Diagnostic::error(
                    format!("unknown vertex {a} in {}", m.src),
                    *line,
                    *col,
                ));
                continue;
            };
            let Some(vb) = dst.vertex_by_name(b) else {
                diags.push(Diagnostic::error(
                    format!("unknown vertex {b} in {}", m.dst),
                    *line,
                    *col,
                ));
                continue;
            };
            vmap[va] = vb;
        }
        let mut hmap = vec![usize::MAX; src.n_halves()];
        let mut deg_e = vec![0u32; src.n_edges()];
        for (a, b, deg, flip, line, col) in &m.eents {
            let Some(ea) = src.edge_by_name(a) else {
                diags.push(Diagnostic::error(
                    format!("unknown edge {a} in {}", m.src),
                    *line,
                    *col,
                ));
                continue;
            };
            let Some(eb) = dst.edge_by_name(b) else {
                diags.push(Diagnostic::error(
                    format!("unknown edge {b} in {}", m.dst),
                    *line,
                    *col,
                ));
                continue;
            };
            let (h0, h1) = if *flip {
                (2 * eb + 1, 2 * eb)
            } else {
                (2 * eb, 2 * eb + 1)
            };
            hmap[2 * ea] = h0;
            hmap[2 * ea + 1] = h1;
            deg_e[ea] = *deg;
        }
        // completeness checks with positions at the map header
        for v in 0..src.n_vertices() {
            if vmap[v] == usize::MAX {
                diags.push(Diagnostic::error(
                    format!("map {} does not map vertex {}", m.name, src.vertex_name(v)),
                    m.line,
                    m.col,
                ));
            }
        }
        for e in 0..src.n_edges() {
            if deg_e[e] == 0 {
                diags.push(Diagnostic::error(
                    format!("map {} does not map edge {}", m.name, src.edge_name(e)),
                    m.line,
                    m.col,
                ));
            }
        }
        if !diags.is_empty() {
            continue;
        }
        // vertex degrees from harmonicity at the first tangent direction
        let mut deg_v = vec![0u32; src.n_vertices()];
        for v in 0..src.n_vertices() {
            let fv = vmap[v];
            if let Some(&h) = dst.tangent(fv).first() {
                deg_v[v] = src
                    .tangent(v)
                    .iter()
                    .filter(|&&hh| hmap[hh] == h)
                    .map(|&hh| deg_e[src.edge_of(hh)])
                    .sum();
            } else {
                deg_v[v] = 1;
            }
            if deg_v[v] == 0 {
                diags.push(Diagnostic::error(
                    format!(
                        "map {}: vertex {} has no edge over some direction at {}",
                        m.name,
                        src.vertex_name(v),
                        dst.vertex_name(fv)
                    ),
                    m.line,
                    m.col,
                ));
            }
        }
        let morphism = Morphism {
            vmap,
            hmap,
            deg_v,
            deg_e,
        };
        if let Err(viol) = crate::harmonic::validate(&morphism, src, dst, None, None) {
            diags.push(Diagnostic::error(
                format!("map {} is not harmonic: {viol}", m.name),
                m.line,
                m.col,
            ));
        }
        if built_maps
            .insert(
                m.name.clone(),
                BuiltMap {
                    src: m.src.clone(),
                    dst: m.dst.clone(),
                    morphism,
                    line: m.line,
                },
            )
            .is_some()
        {
            diags.push(Diagnostic::error(
                format!("map {} is declared twice", m.name),
                m.line,
                m.col,
            ));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    // cover shorthands: generate the top graph and the covering morphism
    struct BuiltCover {
        over: String,
        top_name: String,
        dashed: BTreeSet<usize>,
        cover: crate::harmonic::DoubleCover,
    }
    let mut built_covers: HashMap<String, BuiltCover> = HashMap::new();
    for c in &covers {
        let Some(over) = built.get(&c.over) else {
            diags.push(Diagnostic::error(
                format!("unknown graph {}", c.over),
                c.line,
                c.col,
            ));
            continue;
        };
        let mut dashed = BTreeSet::new();
        for (name, line, col) in &c.dashed {
            match over.edge_by_name(name) {
                Some(e) => {
                    dashed.insert(e);
                }
                None => {
                    diags.push(Diagnostic::error(
                        format!("unknown edge {name} in {}", c.over),
                        *line,
                        *col,
                    ));
                }
            }
        }
        if !diags.is_empty() {
            continue;
        }
        let cover = signed_cover(over, &dashed);
        if built_covers
            .insert(
                c.name.clone(),
                BuiltCover {
                    over: c.over.clone(),
                    top_name: format!("{}~", c.over),
                    dashed,
                    cover,
                },
            )
            .is_some()
        {
            diags.push(Diagnostic::error(
                format!("cover {} is declared twice", c.name),
                c.line,
                c.col,
            ));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    // assemble the tower
    let Some((tname, top_ref, bot_ref, tline)) = tower_stmt else {
        diags.push(Diagnostic::error("missing tower statement", 1, 1));
        return Err(diags);
    };
    let Some(bottom) = built_maps.get(&bot_ref) else {
        diags.push(Diagnostic::error(
            format!("unknown map {bot_ref}"),
            tline,
            1,
        ));
        return Err(diags);
    };
    let mid_name = bottom.src.clone();
    let base_name = bottom.dst.clone();

    let (top_graph, top_name, pi, iota_v, iota_h, dashed): (
        Graph,
        String,
        Morphism,
        Vec<usize>,
        Vec<usize>,
        Option<BTreeSet<usize>>,
    );
    if let Some(c) = built_covers.get(&top_ref) {
        if c.over != mid_name {
            diags.push(Diagnostic::error(
                format!(
                    "cover {top_ref} is over {}, but the bottom map starts at {}",
                    c.over, mid_name
                ),
                tline,
                1,
            ));
            return Err(diags);
        }
        top_graph = c.cover.total.clone();
        top_name = c.top_name.clone();
        pi = c.cover.map.clone();
        iota_v = c.cover.iota_v.clone();
        iota_h = c.cover.iota_h.clone();
        dashed = Some(c.dashed.clone());
    } else if let Some(mm) = built_maps.get(&top_ref) {
        if mm.dst != mid_name {
            diags.push(Diagnostic::error(
                format!(
                    "map {top_ref} lands in {}, but the bottom map starts at {}",
                    mm.dst, mid_name
                ),
                tline,
                1,
            ));
            return Err(diags);
        }
        let src = built.get(&mm.src).unwrap();
        let dst = built.get(&mm.dst).unwrap();
        match derive_iota(&mm.morphism, src, dst) {
            Ok((iv, ih)) => {
                iota_v = iv;
                iota_h = ih;
            }
            Err(e) => {
                diags.push(Diagnostic::error(format!("{e}"), mm.line, 1));
                return Err(diags);
            }
        }
        top_graph = src.clone();
        top_name = mm.src.clone();
        pi = mm.morphism.clone();
        dashed = None;
    } else {
        diags.push(Diagnostic::error(
            format!("unknown cover or map {top_ref}"),
            tline,
            1,
        ));
        return Err(diags);
    }

    let base = built.get(&base_name).unwrap().clone();
    let mid = built.get(&mid_name).unwrap().clone();

    // resolve lengths: explicit specs first, then `auto` through the maps
    let mut lengths: HashMap<String, Vec<Option<LinearForm>>> = HashMap::new();
    for (gname, specs) in &lenspecs {
        let g = &built[gname];
        let mut out = vec![None; g.n_edges()];
        for (e, spec) in specs.iter().enumerate() {
            match spec {
                LenSpec::Var(v) => out[e] = Some(LinearForm::var(vars.lookup(v).unwrap())),
                LenSpec::Rat(q) => {
                    let c = vars.declare(CONST_VAR);
                    out[e] = Some(LinearForm::term(c, q.clone()));
                }
                LenSpec::Auto => {}
            }
        }
        lengths.insert(gname.clone(), out);
    }
    // a generated cover top starts fully unresolved; an explicit top
    // graph keeps its declared specs
    lengths
        .entry(top_name.clone())
        .or_insert_with(|| vec![None; top_graph.n_edges()]);

    // iterate: resolve auto lengths through any map whose target is resolved
    let mut chain: Vec<(&str, &Graph, &Morphism, &str)> = vec![
        (
            mid_name.as_str(),
            &mid,
            &bottom.morphism,
            base_name.as_str(),
        ),
        (top_name.as_str(), &top_graph, &pi, mid_name.as_str()),
    ];
    for _ in 0..3 {
        for (src_name, src_graph, morphism, dst_name) in chain.iter_mut() {
            let dst_done: Option<Vec<LinearForm>> = {
                let d = &lengths[*dst_name];
                if d.iter().all(|x| x.is_some()) {
                    Some(d.iter().map(|x| x.clone().unwrap()).collect())
                } else {
                    None
                }
            };
            if let Some(dl) = dst_done {
                let computed = crate::harmonic::metrize_source(morphism, src_graph, &dl);
                let slot = lengths.get_mut(*src_name).unwrap();
                for e in 0..src_graph.n_edges() {
                    if slot[e].is_none() {
                        slot[e] = Some(computed[e].clone());
                    }
                }
            }
        }
    }
    let take = |name: &str, diags: &mut Vec<Diagnostic>| -> Option<Vec<LinearForm>> {
        let l = &lengths[name];
        if l.iter().all(|x| x.is_some()) {
            Some(l.iter().map(|x| x.clone().unwrap()).collect())
        } else {
            diags.push(Diagnostic::error(
                format!("could not resolve `auto` lengths of graph {name}"),
                1,
                1,
            ));
            None
        }
    };
    let base_len = take(&base_name, &mut diags);
    let mid_len = take(&mid_name, &mut diags);
    let top_len = take(&top_name, &mut diags);
    if !diags.is_empty() {
        return Err(diags);
    }

    let tower = Tower {
        base,
        mid,
        top: top_graph,
        f: bottom.morphism.clone(),
        pi,
        iota_v,
        iota_h,
        base_len,
        mid_len,
        top_len,
        dashed,
    };
    if let Err(e) = tower.validate() {
        diags.push(Diagnostic::error(format!("{e}"), tline, 1));
        return Err(diags);
    }
    Ok(TowerFile {
        vars,
        tower,
        tower_name: tname,
        base_name,
        mid_name,
        top_name,
    })
}

// ---------------------------------------------------------------------------
// serialization

fn render_len(f: &LinearForm, vars: &Vars) -> String {
    // the grammar admits a single variable, a rational, or auto
    let terms: Vec<(usize, BigRational)> = f.iter().map(|(i, c)| (i, c.clone())).collect();
    match terms.as_slice() {
        [(i, c)] if vars.name(*i) != CONST_VAR && c.is_one() => vars.name(*i).to_string(),
        [(i, c)] if vars.name(*i) == CONST_VAR => crate::symgraph::render_rat(c),
        _ => panic!("base lengths must be single variables or rationals"),
    }
}

/// Serializes a tower in the file format; mid and top lengths are written
/// as `auto` (they are determined by the base lengths and the maps).
pub fn serialize_tower(tf: &TowerFile) -> String {
    let t = &tf.tower;
    let vars = &tf.vars;
    let mut out = String::new();
    out.push_str("twr 1\n");
    let lens: Vec<&str> = vars
        .names()
        .iter()
        .filter(|n| n.as_str() != CONST_VAR)
        .map(|s| s.as_str())
        .collect();
    if !lens.is_empty() {
        let _ = writeln!(out, "lengths {}", lens.join(" "));
    }
    let write_graph =
        |out: &mut String, name: &str, g: &Graph, lengths: Option<&Vec<LinearForm>>, auto: bool| {
            let _ = writeln!(out, "graph {name}");
            for v in 0..g.n_vertices() {
                let _ = writeln!(out, "  vertex {}", g.vertex_name(v));
            }
            for e in 0..g.n_edges() {
                let (a, b) = g.endpoints(e);
                let len = if auto {
                    "auto".to_string()
                } else {
                    render_len(&lengths.expect("metric tower")[e], vars)
                };
                let _ = writeln!(
                    out,
                    "  edge {} {} -- {} len {}",
                    g.edge_name(e),
                    g.vertex_name(a),
                    g.vertex_name(b),
                    len
                );
            }
        };
    let write_map = |out: &mut String,
                     name: &str,
                     m: &Morphism,
                     src: &Graph,
                     srcn: &str,
                     dst: &Graph,
                     dstn: &str| {
        let _ = writeln!(out, "map {name} {srcn} -> {dstn}");
        for v in 0..src.n_vertices() {
            let _ = writeln!(
                out,
                "  vertex {} -> {}",
                src.vertex_name(v),
                dst.vertex_name(m.vmap[v])
            );
        }
        for e in 0..src.n_edges() {
            let orient = if m.hmap[2 * e] % 2 == 0 {
                "same"
            } else {
                "flip"
            };
            let _ = writeln!(
                out,
                "  edge {} -> {} deg {} {}",
                src.edge_name(e),
                dst.edge_name(m.emap(e)),
                m.deg_e[e],
                orient
            );
        }
    };
    write_graph(&mut out, &tf.base_name, &t.base, t.base_len.as_ref(), false);
    write_graph(&mut out, &tf.mid_name, &t.mid, None, true);
    write_map(
        &mut out,
        "f",
        &t.f,
        &t.mid,
        &tf.mid_name,
        &t.base,
        &tf.base_name,
    );
    write_graph(&mut out, &tf.top_name, &t.top, None, true);
    write_map(
        &mut out,
        "pi",
        &t.pi,
        &t.top,
        &tf.top_name,
        &t.mid,
        &tf.mid_name,
    );
    let _ = writeln!(out, "tower {} = pi ; f", tf.tower_name);
    out
}

// ---------------------------------------------------------------------------
// gram-matrix files

/// Parses a linear form like `2*l2+2*l3`, `l1-l3` or `3/2`, declaring the
/// variables it mentions.
pub fn parse_linear_form(s: &str, vars: &mut Vars) -> Result<LinearForm, String> {
    let s = s.trim();
    if s == "0" {
        return Ok(LinearForm::zero());
    }
    let mut out = LinearForm::zero();
    let mut term = String::new();
    let mut sign = BigRational::one();
    let mut terms: Vec<(BigRational, String)> = Vec::new();
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push((sign.clone(), std::mem::take(&mut term)));
            sign = if ch == '-' {
                -BigRational::one()
            } else {
                BigRational::one()
            };
        } else if ch == '-' && i == 0 {
            sign = -BigRational::one();
        } else if ch == '+' && i == 0 {
        } else {
            term.push(ch);
        }
    }
    terms.push((sign, term));
    for (sgn, t) in terms {
        let t = t.trim();
        if t.is_empty() {
            return Err("empty term".into());
        }
        let (coef, var) = match t.split_once('*') {
            Some((c, v)) => {
                let q = parse_rational(c).ok_or_else(|| format!("bad coefficient `{c}`"))?;
                (q, v.trim().to_string())
            }
            None => {
                if let Some(q) = parse_rational(t) {
                    (q, CONST_VAR.to_string())
                } else {
                    (BigRational::one(), t.to_string())
                }
            }
        };
        let idx = vars.declare(&var);
        out = out.add(&LinearForm::term(idx, sgn * coef));
    }
    Ok(out)
}

/// Parses a matrix of linear forms, `[[a,b],[c,d]]`.
pub fn parse_gram_text(s: &str, vars: &mut Vars) -> Result<GramMatrix, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = s
        .strip_prefix("[")
        .and_then(|x| x.strip_suffix("]"))
        .ok_or("expected a bracketed matrix")?;
    let mut rows: Vec<Vec<LinearForm>> = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '[' => {
                depth += 1;
                if depth > 1 {
                    return Err("nested rows".into());
                }
                cur.clear();
            }
            ']' => {
                depth -= 1;
                let cells: Vec<&str> = cur.split(',').collect();
                let mut row = Vec::new();
                for c in cells {
                    row.push(parse_linear_form(c, vars)?);
                }
                rows.push(row);
            }
            ',' if depth == 0 => {}
            _ => cur.push(ch),
        }
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err("matrix is not square".into());
    }
    let mut entries = Vec::with_capacity(n * n);
    for r in rows {
        entries.extend(r);
    }
    // symmetry is checked by the constructor
    let g = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| GramMatrix::new(n, entries)))
        .map_err(|_| "matrix is not symmetric".to_string())?;
    Ok(g)
}

/// Parses a gram file: comments and blank lines, then one bracketed matrix
/// (possibly spanning several lines).
pub fn parse_gram_file(text: &str, vars: &mut Vars) -> Result<GramMatrix, String> {
    let body: String = text
        .lines()
        .map(|l| match l.find('#') {
            Some(i) => &l[..i],
            None => l,
        })
        .collect::<Vec<_>>()
        .join("");
    parse_gram_text(&body, vars)
}

// ---------------------------------------------------------------------------
// DOT export

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    Base,
    Mid,
    Top,
}

impl std::str::FromStr for Layer {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base" => Ok(Layer::Base),
            "mid" => Ok(Layer::Mid),
            "top" => Ok(Layer::Top),
            _ => Err(format!("unknown layer `{s}` (expected base, mid or top)")),
        }
    }
}

/// Sheet trivialization over a spanning tree: edges whose lift leaves the
/// chosen sheet are reported as dashed. Fixture-declared dashed sets take
/// precedence in `export_dot`.
pub fn computed_dashed(t: &Tower) -> BTreeSet<usize> {
    let mid = &t.mid;
    let mut chosen = vec![usize::MAX; mid.n_vertices()];
    let mut dashed = BTreeSet::new();
    for start in 0..mid.n_vertices() {
        if chosen[start] != usize::MAX {
            continue;
        }
        chosen[start] = (0..t.top.n_vertices())
            .find(|&p| t.pi.vmap[p] == start)
            .unwrap();
        let mut queue = std::collections::VecDeque::from([start]);
        let mut seen = vec![false; mid.n_vertices()];
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &h in mid.tangent(v) {
                let w = mid.root(mid.mate(h));
                if !seen[w] && chosen[w] == usize::MAX {
                    seen[w] = true;
                    // lift h at the chosen preimage of v
                    let lift = (0..t.top.n_halves())
                        .find(|&hh| t.pi.hmap[hh] == h && t.top.root(hh) == chosen[v]);
                    if let Some(hh) = lift {
                        chosen[w] = t.top.root(t.top.mate(hh));
                    } else {
                        chosen[w] = (0..t.top.n_vertices())
                            .find(|&p| t.pi.vmap[p] == w)
                            .unwrap();
                    }
                    queue.push_back(w);
                }
            }
        }
    }
    for e in 0..mid.n_edges() {
        if t.pi.deg_e[e] > 1 {
            continue; // dilated edges have a single preimage
        }
        let (u, v) = mid.endpoints(e);
        let lift =
            (0..t.top.n_halves()).find(|&hh| t.pi.hmap[hh] == 2 * e && t.top.root(hh) == chosen[u]);
        if let Some(hh) = lift {
            if t.top.root(t.top.mate(hh)) != chosen[v] {
                dashed.insert(e);
            }
        }
    }
    dashed
}

/// Deterministic DOT output; dilation with respect to the base is encoded
/// as pen width, and cross-sheet edges of the double cover are dashed on
/// the mid layer.
pub fn export_dot(t: &Tower, layer: Layer, name: &str) -> String {
    let (g, vdeg, edeg): (&Graph, Vec<u32>, Vec<u32>) = match layer {
        Layer::Base => (
            &t.base,
            vec![1; t.base.n_vertices()],
            vec![1; t.base.n_edges()],
        ),
        Layer::Mid => (&t.mid, t.f.deg_v.clone(), t.f.deg_e.clone()),
        Layer::Top => (
            &t.top,
            (0..t.top.n_vertices())
                .map(|v| t.top_deg_to_base_v(v))
                .collect(),
            (0..t.top.n_edges())
                .map(|e| t.top_deg_to_base_e(e))
                .collect(),
        ),
    };
    let dashed: BTreeSet<usize> = if layer == Layer::Mid {
        match &t.dashed {
            Some(d) => d.clone(),
            None => computed_dashed(t),
        }
    } else {
        BTreeSet::new()
    };
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{name}\" {{");
    for v in 0..g.n_vertices() {
        let _ = writeln!(out, "  \"{}\" [penwidth={}];", g.vertex_name(v), vdeg[v]);
    }
    for e in 0..g.n_edges() {
        let (a, b) = g.endpoints(e);
        let mut attrs = vec![
            format!("label=\"{}\"", g.edge_name(e)),
            format!("penwidth={}", edeg[e]),
        ];
        if dashed.contains(&e) {
            attrs.push("style=dashed".to_string());
        }
        let _ = writeln!(
            out,
            "  \"{}\" -- \"{}\" [{}];",
            g.vertex_name(a),
            g.vertex_name(b),
            attrs.join(", ")
        );
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
