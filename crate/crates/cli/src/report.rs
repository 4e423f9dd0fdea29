//! Reports and their JSON and text renderings. JSON carries `"schema": 1`;
//! every number that is not a count is an exact rational or polynomial
//! string.

use std::fmt::Write;

use serde::Serialize;

use gsdeform::zk::VerdictReport;

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct Failure {
    pub identity: String,
    pub inputs: Vec<String>,
    pub left: String,
    pub right: String,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub diagram: String,
    pub grid: i64,
    pub passed: bool,
    pub curvature_zero: bool,
    pub failures: Vec<Failure>,
}

#[derive(Serialize)]
pub struct TableRow {
    pub inputs: Vec<String>,
    pub value: String,
}

#[derive(Serialize)]
pub struct ResidualComponent {
    pub component: String,
    pub zero: bool,
    /// Number of grid points with a nonzero value; `table` lists the first
    /// of them in grid order.
    pub nonzero: usize,
    pub table: Vec<TableRow>,
}

#[derive(Serialize)]
pub struct ResidualOrder {
    pub order: usize,
    pub zero: bool,
    pub components: Vec<ResidualComponent>,
}

#[derive(Serialize)]
pub struct McReport {
    pub diagram: String,
    pub classical: Option<String>,
    pub quantize: Option<String>,
    pub order: usize,
    pub grid: i64,
    pub passed: bool,
    pub orders: Vec<ResidualOrder>,
}

#[derive(Serialize)]
pub struct CriterionLine {
    pub criterion: u32,
    pub name: String,
    pub passed: bool,
    pub detail: Vec<String>,
}

#[derive(Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub criteria: Vec<CriterionLine>,
}

pub enum Output {
    Verify(VerifyReport),
    Mc(McReport),
    Verdict(Box<VerdictReport>),
    Suite(SuiteReport),
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

fn envelope<T: Serialize>(command: &str, body: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope {
        schema: SCHEMA,
        command,
        body,
    })
    .expect("reports serialize");
    s.push('\n');
    s
}

impl Output {
    /// Whether the run found no mathematical failure. A verdict is an
    /// answer either way.
    pub fn passed(&self) -> bool {
        match self {
            Output::Verify(r) => r.passed,
            Output::Mc(r) => r.passed,
            Output::Verdict(_) => true,
            Output::Suite(r) => r.failed == 0,
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Output::Verify(r) => envelope("verify", r),
            Output::Mc(r) => envelope("mc", r),
            Output::Verdict(r) => envelope("verdict", r.as_ref()),
            Output::Suite(r) => envelope("suite", r),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            Output::Verify(r) => {
                let status = if r.passed { "pass" } else { "fail" };
                let _ = writeln!(s, "verify {} (grid {}): {status}", r.diagram, r.grid);
                for f in &r.failures {
                    let _ = writeln!(s, "  {} fails at ({}): {} ≠ {}", f.identity, f.inputs.join(", "), f.left, f.right);
                }
                if !r.curvature_zero {
                    let _ = writeln!(s, "  curvature P_Φ(M) is nonzero");
                }
            }
            Output::Mc(r) => {
                let _ = writeln!(s, "mc {} (order {}, grid {})", r.diagram, r.order, r.grid);
                if let Some(c) = &r.classical {
                    let _ = writeln!(s, "  classical {c}");
                }
                if let Some(q) = &r.quantize {
                    let _ = writeln!(s, "  quantize {q}");
                }
                for o in &r.orders {
                    let status = if o.zero { "0" } else { "nonzero" };
                    let _ = writeln!(s, "order {}: {status}", o.order);
                    for c in o.components.iter().filter(|c| !c.zero) {
                        let _ = writeln!(s, "  {}: {} nonzero values", c.component, c.nonzero);
                        for row in &c.table {
                            let _ = writeln!(s, "    ({}) -> {}", row.inputs.join(", "), row.value);
                        }
                    }
                }
            }
            Output::Verdict(r) => {
                let _ = writeln!(s, "Z_{}, i = {}: {}", r.k, r.i, r.verdict);
                let _ = writeln!(s, "  bivector on U: ({}) ∂_z∧∂_u", r.bivector_frame_u);
                if let Some(dec) = &r.cech.decomposition {
                    for (name, p) in dec {
                        let _ = writeln!(s, "  {name} = {p}");
                    }
                }
                if let Some(coords) = &r.cech.basis_coords {
                    for (basis, c) in coords {
                        let _ = writeln!(s, "  class coordinate on {basis}: {c}");
                    }
                }
                let _ = writeln!(s, "  second-order residual on V:");
                for e in &r.residual_monomial_table {
                    let _ = writeln!(s, "    O({}, {}) = {}", e.f, e.g, e.value);
                }
            }
            Output::Suite(r) => {
                for c in &r.criteria {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    let _ = writeln!(s, "criterion {} {status}  {}", c.criterion, c.name);
                    for d in &c.detail {
                        let _ = writeln!(s, "    {d}");
                    }
                }
                let _ = writeln!(s, "seed {}: {} passed, {} failed", r.seed, r.passed, r.failed);
            }
        }
        s
    }
}
