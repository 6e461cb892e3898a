//! Command-line front end: validation, the n-gonal construction,
//! orientability, triality, Prym Gram matrices, congruence search, the
//! psi factorization, contraction, connectivity prediction, DOT export,
//! and the combined check suite.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use twr_core::harmonic::{base_points, classify_fiber};
use twr_core::intlat::congruence_search;
use twr_core::ngonal::{
    self, donagi_construct, donagi_to_tower, is_orientable, split, triality_check,
    wd4::predict_connectivity,
};
use twr_core::prym::{prym_isomorphism_check, prym_lattice};
use twr_core::symgraph::{betti, components};
use twr_core::towerio::{
    export_dot, parse_gram_file, parse_tower, serialize_tower, Diagnostic, Layer, Severity,
    TowerFile,
};
use twr_core::{GramMatrix, Vars};

#[derive(Parser)]
#[command(
    name = "twr",
    version,
    about = "towers of metric graphs and the tetragonal construction"
)]
struct Cli {
    /// emit a single JSON object instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// parse and validate a tower file
    Validate { file: PathBuf },
    /// run the n-gonal construction and write the output tower(s)
    Construct {
        file: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: PathBuf,
        /// split into the two output towers (requires n = 4, orientable)
        #[arg(long)]
        split: bool,
    },
    /// report whether the orientation double cover is trivial
    Orientable { file: PathBuf },
    /// verify the triality on the tower
    Triality { file: PathBuf },
    /// print a Prym Gram matrix
    Gram {
        file: PathBuf,
        #[arg(long, default_value = "input")]
        of: String,
    },
    /// search for a unimodular congruence between two Gram matrices
    Congruent {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// factor the correspondence through multiplication by 2
    Psi { file: PathBuf },
    /// contract a base edge together with all of its preimages
    Contract {
        file: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// predict component counts from the octuple-quotient monodromy
    Predict { file: PathBuf },
    /// write a DOT rendering of one layer
    Dot {
        file: PathBuf,
        #[arg(long, value_parser = parse_layer)]
        layer: Layer,
        #[arg(long)]
        out: PathBuf,
    },
    /// run the full identity suite (4-identity, doubling, psi, dimensions)
    Check { file: PathBuf },
}

fn parse_layer(s: &str) -> Result<Layer, String> {
    s.parse()
}

struct Report {
    command: &'static str,
    input: String,
    status: &'static str,
    data: serde_json::Value,
    diagnostics: Vec<Diagnostic>,
    text: String,
}

impl Report {
    fn emit(self, as_json: bool) -> ExitCode {
        if as_json {
            let obj = json!({
                "command": self.command,
                "input": self.input,
                "status": self.status,
                "data": self.data,
                "diagnostics": self.diagnostics,
            });
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        } else {
            if !self.text.is_empty() {
                print!("{}", self.text);
            }
            for d in &self.diagnostics {
                eprintln!("{}: {}", self.input, d);
            }
        }
        if self.status == "ok" || self.status == "pass" {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        }
    }
}

fn load(path: &Path) -> Result<TowerFile, Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        vec![Diagnostic {
            severity: Severity::Error,
            message: format!("cannot read {}: {e}", path.display()),
            line: 0,
            col: 0,
        }]
    })?;
    parse_tower(&text)
}

fn fail(command: &'static str, input: String, diags: Vec<Diagnostic>) -> Report {
    Report {
        command,
        input,
        status: "error",
        data: json!({}),
        diagnostics: diags,
        text: String::new(),
    }
}

fn errmsg(command: &'static str, input: String, msg: String) -> Report {
    fail(
        command,
        input,
        vec![Diagnostic {
            severity: Severity::Error,
            message: msg,
            line: 0,
            col: 0,
        }],
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(cli.command);
    report.emit(cli.json)
}

fn run(cmd: Cmd) -> Report {
    match cmd {
        Cmd::Validate { file } => {
            let input = file.display().to_string();
            match load(&file) {
                Ok(tf) => {
                    let deg = tf
                        .tower
                        .bottom_degree()
                        .map(|d| d.to_string())
                        .unwrap_or_default();
                    let text = format!(
                        "valid tower {} (bottom degree {}, top {} vertices)\n",
                        tf.tower_name,
                        deg,
                        tf.tower.top.n_vertices()
                    );
                    Report {
                        command: "validate",
                        input,
                        status: "ok",
                        data: json!({"tower": tf.tower_name, "bottom_degree": deg}),
                        diagnostics: vec![],
                        text,
                    }
                }
                Err(diags) => fail("validate", input, diags),
            }
        }
        Cmd::Construct {
            file,
            n,
            out,
            split: do_split,
        } => {
            let input = file.display().to_string();
            let tf = match load(&file) {
                Ok(tf) => tf,
                Err(d) => return fail("construct", input, d),
            };
            if let Err(e) = std::fs::create_dir_all(&out) {
                return errmsg(
                    "construct",
                    input,
                    format!("cannot create {}: {e}", out.display()),
                );
            }
            let mut written = Vec::new();
            if do_split {
                if n != 4 {
                    return errmsg("construct", input, "--split requires --n 4".into());
                }
                let (o1, o2) = match split(&tf.tower) {
                    Ok(p) => p,
                    Err(e) => return errmsg("construct", input, e.to_string()),
                };
                for (i, o) in [o1, o2].into_iter().enumerate() {
                    let path = out.join(format!("out{}.twr", i + 1));
                    let text = serialize_tower(&TowerFile {
                        vars: tf.vars.clone(),
                        tower: o.tower,
                        tower_name: format!("OUT{}", i + 1),
                        base_name: tf.base_name.clone(),
                        mid_name: format!("C{}", i + 1),
                        top_name: format!("C{}t", i + 1),
                    });
                    if let Err(e) = std::fs::write(&path, text) {
                        return errmsg(
                            "construct",
                            input,
                            format!("cannot write {}: {e}", path.display()),
                        );
                    }
                    written.push(path.display().to_string());
                }
            } else {
                let o = match donagi_construct(&tf.tower, n) {
                    Ok(o) => o,
                    Err(e) => return errmsg("construct", input, e.to_string()),
                };
                let tower = match donagi_to_tower(&tf.tower, &o) {
                    Ok(t) => t,
                    Err(e) => return errmsg("construct", input, e.to_string()),
                };
                let path = out.join("p.twr");
                let text = serialize_tower(&TowerFile {
                    vars: tf.vars.clone(),
                    tower,
                    tower_name: "P".into(),
                    base_name: tf.base_name.clone(),
                    mid_name: "Q".into(),
                    top_name: "Pt".into(),
                });
                if let Err(e) = std::fs::write(&path, text) {
                    return errmsg(
                        "construct",
                        input,
                        format!("cannot write {}: {e}", path.display()),
                    );
                }
                written.push(path.display().to_string());
            }
            Report {
                command: "construct",
                input,
                status: "ok",
                data: json!({"written": written}),
                diagnostics: vec![],
                text: written.iter().map(|w| format!("wrote {w}\n")).collect(),
            }
        }
        Cmd::Orientable { file } => {
            let input = file.display().to_string();
            let tf = match load(&file) {
                Ok(tf) => tf,
                Err(d) => return fail("orientable", input, d),
            };
            match is_orientable(&tf.tower) {
                Ok(orientable) => Report {
                    command: "orientable",
                    input,
                    status: "ok",
                    data: json!({"orientable": orientable}),
                    diagnostics: vec![],
                    text: format!(
                        "{}\n",
                        if orientable {
                            "orientable"
                        } else {
                            "non-orientable"
                        }
                    ),
                },
                Err(e) => errmsg("orientable", input, e.to_string()),
            }
        }
        Cmd::Triality { file } => {
            let input = file.display().to_string();
            let tf = match load(&file) {
                Ok(tf) => tf,
                Err(d) => return fail("triality", input, d),
            };
            match triality_check(&tf.tower) {
                Ok(rep) => {
                    let mut text = String::new();
                    for d in &rep.details {
                        text.push_str(d);
                        text.push('\n');
                    }
                    text.push_str(if rep.passed {
                        "triality: pass\n"
                    } else {
                        "triality: FAIL\n"
                    });
                    Report {
                        command: "triality",
                        input,
                        status: if rep.passed { "pass" } else { "fail" },
                        data: json!({"passed": rep.passed, "details": rep.details}),
                        diagnostics: vec![],
                        text,
                    }
                }
                Err(e) => errmsg("triality", input, e.to_string()),
            }
        }
        Cmd::Gram { file, of } => {
            let input = file.display().to_string();
            let tf = match load(&file) {
                Ok(tf) => tf,
                Err(d) => return fail("gram", input, d),
            };
            let gram = match of.as_str() {
                "input" => prym_lattice(&tf.tower)
                    .map(|p| p.gram)
                    .map_err(|e| e.to_string()),
                "out1" | "out2" => {
                    split(&tf.tower)
                        .map_err(|e| e.to_string())
                        .and_then(|(a, b)| {
                            let o = if of == "out1" { a } else { b };
                            prym_lattice(&o.tower)
                                .map(|p| p.gram)
                                .map_err(|e| e.to_string())
                        })
                }
                other => Err(format!(
                    "unknown --of `{other}` (expected input, out1 or out2)"
                )),
            };
            match gram {
                Ok(g) => {
                    let rendered = g.render(&tf.vars);
                    Report {
                        command: "gram",
                        input,
                        status: "ok",
                        data: json!({"of": of, "gram": rendered}),
                        diagnostics: vec![],
                        text: format!("{rendered}\n"),
                    }
                }
                Err(e) => errmsg("gram", input, e),
            }
        }
        Cmd::Congruent { g1, g2, bound } => {
            let input = format!("{} {}", g1.display(), g2.display());
            let mut vars = Vars::new();
            let a = match load_gram(&g1, &mut vars) {
                Ok(g) => g,
                Err(e) => return errmsg("congruent", input, e),
            };
            let b = match load_gram(&g2, &mut vars) {
                Ok(g) => g,
                Err(e) => return errmsg("congruent", input, e),
            };
            match congruence_search(&vars, &a, &b, bound) {
                Ok(Some(w)) => {
                    let rendered = w.render();
                    Report {
                        command: "congruent",
                        input,
                        status: "ok",
                        data: json!({"witness": rendered, "bound": bound}),
                        diagnostics: vec![],
                        text: format!("{rendered}\n"),
                    }
                }
                Ok(None) => Report {
                    command: "congruent",
                    input,
                    status: "fail",
                    data: json!({"witness": null, "bound": bound}),
                    diagnostics: vec![],
                    text: format!("none within bound {bound}\n"),
                },
                Err(e) => errmsg("congruent", input, e.to_string()),
            }
        }
        Cmd::Psi { file } => {
            let input = file.display().to_string();
            let tf = match load(&file) {
                Ok(tf) => tf,
                Err(d) => return fail("psi", input, d),
            };
            match prym_isomorphism_check(&tf.tower) {
                Ok(rep) => {
                    let mut text = String::new();
                    let mut ok = true;
                    let mut outputs = Vec::new();
                    for (i, psi) in rep.psi.iter().enumerate() {
                        match psi {
                            Ok(m) => {
                                text.push_str(&format!("psi out{}: {}\n", i + 1, m.render()));
                                outputs.push(json!({"psi": m.render()}));
                            }
                            Err(e) => {
                                ok = false;
                                text.push_str(&format!("psi out{}: {}\n", i + 1, e));
                                outputs.push(json!({"error": e.to_string()}));
                            }
                        }
                    }
                    Report {
                        command: "psi",
                        input,
                        status: if ok { "ok" } else { "fail" },
                        data: json!({"outputs": outputs, "gram_input": rep.gram_input.render(&tf.vars)}),
                        diagnostics: vec![],
                        text,
                    }
                }
                Err(e) => errmsg("psi", input, e),
            }
        }
        Cmd::Contract { file, edge, out } => {
            let input = file.display().to_string();
            let tf = match load(&file) {
                Ok(tf) => tf,
                Err(d) => return fail("contract", input, d),
            };
            let Some(e) = tf.tower.base.edge_by_name(&edge) else {
                return errmsg("contract", input, format!("no base edge named {edge}"));
            };
            match ngonal::contract_tower(&tf.tower, e) {
                Ok(tower) => {
                    let text = serialize_tower(&TowerFile {
                        vars: tf.vars.clone(),
                        tower,
                        tower_name: tf.tower_name.clone(),
                        base_name: tf.base_name.clone(),
                        mid_name: tf.mid_name.clone(),
                        top_name: tf.top_name.clone(),
                    });
                    if let Err(err) = std::fs::write(&out, text) {
                        return errmsg(
                            "contract",
                            input,
                            format!("cannot write {}: {err}", out.display()),
                        );
                    }
                    Report {
                        command: "contract",
                        input,
                        status: "ok",
                        data: json!({"written": out.display().to_string(), "edge": edge}),
                        diagnostics: vec![],
                        text: format!("wrote {}\n", out.display()),
                    }
                }
                Err(e) => errmsg("contract", input, e.to_string()),
            }
        }
        Cmd::Predict { file } => {
            let input = file.display().to_string();
            let tf = match load(&file) {
                Ok(tf) => tf,
                Err(d) => return fail("predict", input, d),
            };
            match predict_connectivity(&tf.tower) {
                Ok(pred) => {
                    let actual_top = components(&tf.tower.top).count;
                    let actual_donagi = donagi_construct(&tf.tower, 4)
                        .map(|o| components(&o.graph).count)
                        .unwrap_or(0);
                    let agrees = pred.top_components == actual_top
                        && pred.donagi_components == actual_donagi;
                    Report {
                        command: "predict",
                        input,
                        status: if agrees { "pass" } else { "fail" },
                        data: json!({
                            "predicted": {"top": pred.top_components, "donagi": pred.donagi_components},
                            "actual": {"top": actual_top, "donagi": actual_donagi},
                        }),
                        diagnostics: vec![],
                        text: format!(
                            "predicted: top {} / donagi {}\nactual:    top {} / donagi {}\n{}\n",
                            pred.top_components,
                            pred.donagi_components,
                            actual_top,
                            actual_donagi,
                            if agrees {
                                "prediction: pass"
                            } else {
                                "prediction: FAIL"
                            }
                        ),
                    }
                }
                Err(e) => errmsg("predict", input, e.to_string()),
            }
        }
        Cmd::Dot { file, layer, out } => {
            let input = file.display().to_string();
            let tf = match load(&file) {
                Ok(tf) => tf,
                Err(d) => return fail("dot", input, d),
            };
            let name = match layer {
                Layer::Base => &tf.base_name,
                Layer::Mid => &tf.mid_name,
                Layer::Top => &tf.top_name,
            };
            let dot = export_dot(&tf.tower, layer, name);
            if let Err(e) = std::fs::write(&out, dot) {
                return errmsg("dot", input, format!("cannot write {}: {e}", out.display()));
            }
            Report {
                command: "dot",
                input,
                status: "ok",
                data: json!({"written": out.display().to_string()}),
                diagnostics: vec![],
                text: format!("wrote {}\n", out.display()),
            }
        }
        Cmd::Check { file } => {
            let input = file.display().to_string();
            let tf = match load(&file) {
                Ok(tf) => tf,
                Err(d) => return fail("check", input, d),
            };
            run_check(input, &tf)
        }
    }
}

fn run_check(input: String, tf: &TowerFile) -> Report {
    let t = &tf.tower;
    let mut lines: Vec<(String, bool)> = Vec::new();
    let rep = match prym_isomorphism_check(t) {
        Ok(r) => r,
        Err(e) => return errmsg("check", input, e),
    };
    for i in 0..2 {
        lines.push((format!("4-identity out{}", i + 1), rep.four_id[i]));
        lines.push((
            format!("polarization doubling out{}", i + 1),
            rep.doubling[i],
        ));
        match &rep.psi[i] {
            Ok(m) => lines.push((format!("psi isometry out{} ({})", i + 1, m.render()), true)),
            Err(e) => lines.push((format!("psi isometry out{} ({e})", i + 1), false)),
        }
    }
    match split(t) {
        Ok((o1, o2)) => {
            let d = |tw: &twr_core::Tower| betti(&tw.top) as i64 - betti(&tw.mid) as i64;
            let (d0, d1, d2) = (d(t), d(&o1.tower), d(&o2.tower));
            lines.push((
                format!("prym dimensions {} = {} = {}", d0, d1, d2),
                d0 == d1 && d1 == d2,
            ));
            let same_types = base_points(t).iter().all(|&x| {
                classify_fiber(t, x) == classify_fiber(&o1.tower, x)
                    && classify_fiber(t, x) == classify_fiber(&o2.tower, x)
            });
            lines.push(("fiber types preserved".to_string(), same_types));
        }
        Err(e) => lines.push((format!("split ({e})"), false)),
    }
    let passed = lines.iter().all(|(_, ok)| *ok);
    let text: String = lines
        .iter()
        .map(|(name, ok)| format!("{}: {}\n", name, if *ok { "pass" } else { "FAIL" }))
        .collect::<String>()
        + if passed {
            "check: pass\n"
        } else {
            "check: FAIL\n"
        };
    Report {
        command: "check",
        input,
        status: if passed { "pass" } else { "fail" },
        data: json!({
            "checks": lines.iter().map(|(n, ok)| json!({"name": n, "pass": ok})).collect::<Vec<_>>(),
        }),
        diagnostics: vec![],
        text,
    }
}

/// Loads a Gram matrix from a gram file, or from a tower file (taking the
/// Prym Gram of its input tower).
fn load_gram(path: &Path, vars: &mut Vars) -> Result<GramMatrix, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let is_tower = text
        .lines()
        .map(|l| match l.find('#') {
            Some(i) => l[..i].trim(),
            None => l.trim(),
        })
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("twr"));
    if is_tower {
        let tf = parse_tower(&text).map_err(|ds| {
            ds.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        })?;
        let p = prym_lattice(&tf.tower).map_err(|e| e.to_string())?;
        let map = vars.absorb(&tf.vars);
        Ok(p.gram.remap(&map))
    } else {
        parse_gram_file(&text, vars)
    }
}
