use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ratlaurent::{parse_poly_in, LaurentPoly, Var};

/// A bivector `Σ_{i<j} η^{ij} ∂_i ∧ ∂_j` on coordinates `x_1, …, x_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bivector {
    vars: Vec<Var>,
    upper: BTreeMap<(usize, usize), LaurentPoly>,
}

#[derive(Deserialize)]
struct BivectorConfig {
    dim: usize,
    coeffs: BTreeMap<String, String>,
}

impl Bivector {
    /// Entries may be given for either ordering of the indices; `(j, i)`
    /// contributes `-η` to `η^{ij}`.
    pub fn new(vars: Vec<Var>, entries: impl IntoIterator<Item = ((usize, usize), LaurentPoly)>) -> Result<Bivector> {
        let d = vars.len();
        let mut upper: BTreeMap<(usize, usize), LaurentPoly> = BTreeMap::new();
        for ((i, j), c) in entries {
            if i >= d || j >= d {
                return Err(Error::Invalid(format!("index ({i}, {j}) out of range for dimension {d}")));
            }
            let (key, c) = match i.cmp(&j) {
                std::cmp::Ordering::Less => ((i, j), c),
                std::cmp::Ordering::Greater => ((j, i), -c),
                std::cmp::Ordering::Equal => {
                    if c.is_zero() {
                        continue;
                    }
                    return Err(Error::Invalid(format!("diagonal entry η^{{{i}{i}}} must vanish")));
                }
            };
            let e = upper.entry(key).or_insert_with(LaurentPoly::zero);
            *e += c;
        }
        upper.retain(|_, c| !c.is_zero());
        Ok(Bivector { vars, upper })
    }

    /// `f ∂_x ∧ ∂_y`.
    pub fn planar(x: Var, y: Var, f: LaurentPoly) -> Bivector {
        Bivector::new(vec![x, y], [((0, 1), f)]).expect("two distinct indices")
    }

    /// `{ "dim": d, "coeffs": { "1,2": "<poly>", … } }` with 1-based indices
    /// into `vars`.
    pub fn from_config(text: &str, vars: &[Var]) -> Result<Bivector> {
        let cfg: BivectorConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.dim != vars.len() {
            return Err(Error::Config(format!(
                "bivector of dimension {} on a chart with {} coordinates",
                cfg.dim,
                vars.len()
            )));
        }
        let mut entries = Vec::new();
        for (key, poly) in &cfg.coeffs {
            let idx: Vec<usize> = key
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Config(format!("bad index pair `{key}`")))?;
            if idx.len() != 2 || idx.contains(&0) {
                return Err(Error::Config(format!("bad index pair `{key}` (1-based)")));
            }
            entries.push(((idx[0] - 1, idx[1] - 1), parse_poly_in(poly, vars)?));
        }
        Bivector::new(vars.to_vec(), entries)
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    /// `η^{ij}` with the antisymmetric completion.
    pub fn entry(&self, i: usize, j: usize) -> LaurentPoly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper.get(&(i, j)).cloned().unwrap_or_else(LaurentPoly::zero),
            std::cmp::Ordering::Greater => -self.upper.get(&(j, i)).cloned().unwrap_or_else(LaurentPoly::zero),
            std::cmp::Ordering::Equal => LaurentPoly::zero(),
        }
    }

    /// `∂_l η^{ij}`.
    pub fn entry_deriv(&self, i: usize, j: usize, l: usize) -> LaurentPoly {
        self.entry(i, j).derivative(self.vars[l], 1)
    }
}

/// `{f, g}_η = Σ_{i,j} η^{ij} ∂_i f ∂_j g`.
pub fn poisson_bracket(eta: &Bivector, f: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
    let d = eta.dim();
    let mut out = LaurentPoly::zero();
    for i in 0..d {
        let fi = f.derivative(eta.vars[i], 1);
        if fi.is_zero() {
            continue;
        }
        for j in 0..d {
            let e = eta.entry(i, j);
            if e.is_zero() {
                continue;
            }
            out += &(&e * &fi) * &g.derivative(eta.vars[j], 1);
        }
    }
    out
}

/// Nonzero components `[η, η]^{ijk}` (`i < j < k`) of the Schouten
/// self-bracket: `2 Σ_l (η^{li} ∂_l η^{jk} + η^{lj} ∂_l η^{ki} + η^{lk} ∂_l η^{ij})`.
pub fn schouten_self(eta: &Bivector) -> BTreeMap<(usize, usize, usize), LaurentPoly> {
    let d = eta.dim();
    let mut out = BTreeMap::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let mut c = LaurentPoly::zero();
                for l in 0..d {
                    c += &eta.entry(l, i) * &eta.entry_deriv(j, k, l);
                    c += &eta.entry(l, j) * &eta.entry_deriv(k, i, l);
                    c += &eta.entry(l, k) * &eta.entry_deriv(i, j, l);
                }
                let c = c.scale(&crate::ratlaurent::rat(2, 1));
                if !c.is_zero() {
                    out.insert((i, j, k), c);
                }
            }
        }
    }
    out
}
