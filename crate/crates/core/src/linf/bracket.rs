use num::One;

use super::element::LInfElement;
use super::sign::koszul_sign;
use super::voronov::VoronovData;
use crate::cochain::{circle, g_bracket, parity_sign, Cochain, Signature};
use crate::error::Result;
use crate::gs::{after_legs, APair, Chart, Diagonal};
use crate::ratlaurent::Rational;

/// Which construction evaluates the multibrackets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Closed formulas: Gerstenhaber brackets on each chart and slot
    /// distribution of the `𝔞`-arguments into `x_W`, remaining slots filled
    /// with `Φ`.
    Explicit,
    /// Nested brackets in `𝔤` followed by `P_Φ`.
    Derived,
}

/// Sign of the binary bracket `⟨x[1], y[1]⟩ = (-1)^{|x|} [x, y][1]`, with
/// `|x|` the degree in `𝔤`.
pub fn binary_g_sign(x_degree: i64) -> Rational {
    parity_sign(x_degree)
}

#[derive(Default)]
struct Partial {
    g: Option<Diagonal>,
    a: Option<APair>,
}

/// `⟨X_1, …, X_n⟩` on the explicit route.
pub fn linf_bracket(vd: &VoronovData, elements: &[LInfElement]) -> Result<LInfElement> {
    bracket(vd, Route::Explicit, elements)
}

/// `⟨X_1, …, X_n⟩` on either route.
///
/// Each argument is split into its `𝔤̃[1]` and `𝔞` parts; every resulting
/// term is reordered so the `𝔤̃[1]` entries come first (with the Koszul
/// sign) and evaluated from the table of nonvanishing brackets:
/// `⟨⟩`, `⟨a_1, …, a_n⟩`, `⟨x[1], a_1, …, a_n⟩` and `⟨x[1], y[1]⟩`.
pub fn bracket(vd: &VoronovData, route: Route, elements: &[LInfElement]) -> Result<LInfElement> {
    let degree = elements.iter().map(|e| e.degree()).sum::<i64>() + 1;
    let degs: Vec<i64> = elements.iter().map(|e| e.degree()).collect();
    let mut out = LInfElement::zero(degree);
    let n = elements.len();
    // choice[j] = true picks the g-part of element j.
    let mut choice = vec![false; n];
    loop {
        let pieces_present = (0..n).all(|j| {
            if choice[j] {
                elements[j].g.is_some()
            } else {
                elements[j].a.is_some()
            }
        });
        if pieces_present {
            let gi: Vec<usize> = (0..n).filter(|&j| choice[j]).collect();
            let ai: Vec<usize> = (0..n).filter(|&j| !choice[j]).collect();
            let perm: Vec<usize> = gi.iter().chain(&ai).copied().collect();
            let sign = koszul_sign(&degs, &perm);
            let gs: Vec<&Diagonal> = gi.iter().map(|&j| elements[j].g.as_ref().expect("present")).collect();
            let r#as: Vec<&APair> = ai.iter().map(|&j| elements[j].a.as_ref().expect("present")).collect();
            let p = match route {
                Route::Explicit => explicit_table(vd, &gs, &r#as)?,
                Route::Derived => derived_table(vd, &gs, &r#as)?,
            };
            let s = Rational::from_integer(sign.into());
            let term = LInfElement::new(degree, p.g.map(|x| x.scale(&s)), p.a.map(|x| x.scale(&s)))?;
            out = out.add(&term)?;
        }
        // next choice vector
        let mut j = 0;
        while j < n && choice[j] {
            choice[j] = false;
            j += 1;
        }
        if j == n {
            break;
        }
        choice[j] = true;
    }
    Ok(out)
}

fn endo_sig(a: &crate::cochain::AlgRef, q: usize) -> Signature {
    Signature {
        sources: vec![a.id.clone(); q],
        target: a.id.clone(),
    }
}

/// `[f, g]` for two endomorphism cochains of one algebra.
fn chart_bracket(f: &Cochain, g: &Cochain) -> Cochain {
    let a = f.target().clone();
    let q = f.arity() + g.arity() - 1;
    g_bracket(f, g)
        .component(&endo_sig(&a, q))
        .cloned()
        .unwrap_or_else(|| Cochain::zero(vec![a.clone(); q], a))
}

fn diag_bracket(x: &Diagonal, y: &Diagonal) -> Diagonal {
    Diagonal {
        u: chart_bracket(&x.u, &y.u),
        v: chart_bracket(&x.v, &y.v),
        w: chart_bracket(&x.w, &y.w),
    }
}

/// `x_W ∘^Φ a - Φ ∘ x` evaluated as `x_W∘Φ^{⊗q} - Φ∘x` on each side.
fn twisted_unary(vd: &VoronovData, x: &Diagonal) -> Result<APair> {
    let side = |c: Chart| -> Result<Cochain> {
        let leg = vd.phi().get(c);
        after_legs(&x.w, leg)?.sub(&Cochain::compose(leg, &[x.get(c).clone()])?)
    };
    Ok(APair {
        u: side(Chart::U)?,
        v: side(Chart::V)?,
    })
}

/// Plugs the outputs of `a_1, …, a_m` into `m` distinct inputs of `x_W` in
/// every possible way, filling the remaining inputs with `Φ`. The term with
/// `a_t` in slot `s_t` carries `Π_t (-1)^{|a_t| p_t}`, where `p_t` is the
/// number of inputs to the left of `a_t` in the composite:
/// `p_t = s_t + Σ_{t' < t, s_{t'} < s_t} |a_{t'}|`. For `m = 1` the term
/// `-(-1)^{|x||a|} a ∘ x` is added.
fn slot_distribution(vd: &VoronovData, x: &Diagonal, args: &[&APair]) -> Result<Option<APair>> {
    let q = x.arity();
    let m = args.len();
    if m > q {
        return Ok(None);
    }
    let d = vd.diagram();
    let xdeg = x.degree();
    let side = |c: Chart| -> Result<Cochain> {
        let src = d.algebra(c).clone();
        let leg = vd.phi().get(c);
        let arity = args.iter().map(|a| a.arity()).sum::<usize>() + q - m;
        let mut parts = Vec::new();
        let mut slots = Vec::with_capacity(m);
        fn rec(
            q: usize,
            m: usize,
            slots: &mut Vec<usize>,
            visit: &mut dyn FnMut(&[usize]) -> Result<()>,
        ) -> Result<()> {
            if slots.len() == m {
                return visit(slots);
            }
            for s in 0..q {
                if !slots.contains(&s) {
                    slots.push(s);
                    rec(q, m, slots, visit)?;
                    slots.pop();
                }
            }
            Ok(())
        }
        rec(q, m, &mut slots, &mut |assign: &[usize]| {
            let mut exponent = 0i64;
            for (t, &s) in assign.iter().enumerate() {
                let shift: i64 = (0..t).filter(|&u| assign[u] < s).map(|u| args[u].degree()).sum();
                exponent += args[t].degree() * (s as i64 + shift);
            }
            let mut inputs = vec![leg.clone(); q];
            for (t, &s) in assign.iter().enumerate() {
                inputs[s] = args[t].get(c).clone();
            }
            parts.push(Cochain::compose(&x.w, &inputs)?.scale(&parity_sign(exponent)));
            Ok(())
        })?;
        if m == 1 {
            let a = args[0].get(c);
            let sig = Signature {
                sources: vec![src.id.clone(); arity],
                target: d.a_w.id.clone(),
            };
            if let Some(ax) = circle(a, x.get(c)).component(&sig) {
                parts.push(ax.scale(&-parity_sign(xdeg * a.degree())));
            }
        }
        Cochain::sum(vec![src; arity], d.a_w.clone(), &parts)
    };
    Ok(Some(APair {
        u: side(Chart::U)?,
        v: side(Chart::V)?,
    }))
}

fn explicit_table(vd: &VoronovData, gs: &[&Diagonal], args: &[&APair]) -> Result<Partial> {
    Ok(match (gs, args.len()) {
        ([], 0) => Partial {
            g: None,
            a: Some(twisted_unary(vd, vd.m())?),
        },
        ([], _) => Partial {
            g: None,
            a: slot_distribution(vd, vd.m(), args)?,
        },
        ([x], 0) => Partial {
            g: Some(diag_bracket(vd.m(), x).scale(&-Rational::one())),
            a: Some(twisted_unary(vd, x)?),
        },
        ([x], m) => Partial {
            g: None,
            a: if m as i64 > x.degree() + 1 {
                None
            } else {
                slot_distribution(vd, x, args)?
            },
        },
        ([x, y], 0) => Partial {
            g: Some(diag_bracket(x, y).scale(&binary_g_sign(x.degree()))),
            a: None,
        },
        _ => Partial::default(),
    })
}

fn derived_table(vd: &VoronovData, gs: &[&Diagonal], args: &[&APair]) -> Result<Partial> {
    let d = vd.diagram();
    Ok(match (gs, args.len()) {
        ([], 0) => Partial {
            g: None,
            a: Some(APair::from_gelement(d, &vd.curvature()?, 2)),
        },
        ([], _) => Partial {
            g: None,
            a: Some(vd.derived_bracket(args)?),
        },
        ([x], 0) => Partial {
            g: Some(vd.g_bracket_diag(vd.m(), x).scale(&-Rational::one())),
            a: Some(APair::from_gelement(d, &vd.p_phi(&x.to_gelement())?, x.arity())),
        },
        ([x], _) => Partial {
            g: None,
            a: Some(vd.derived_mixed(x, args)?),
        },
        ([x, y], 0) => Partial {
            g: Some(vd.g_bracket_diag(x, y).scale(&binary_g_sign(x.degree()))),
            a: None,
        },
        _ => Partial::default(),
    })
}
