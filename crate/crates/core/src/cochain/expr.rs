use std::fmt;
use std::sync::Arc;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::ratlaurent::{AlgebraSpec, LaurentPoly, Monomial, MorphismSpec, Rational, Var};

pub type AlgRef = Arc<AlgebraSpec>;

/// A linear map on polynomials defined monomial by monomial.
pub struct MonomialMap {
    pub name: String,
    f: Box<dyn Fn(&Monomial) -> Result<LaurentPoly> + Send + Sync>,
}

impl MonomialMap {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&Monomial) -> Result<LaurentPoly> + Send + Sync + 'static,
    ) -> Arc<MonomialMap> {
        Arc::new(MonomialMap {
            name: name.into(),
            f: Box::new(f),
        })
    }

    pub fn apply(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        for (m, c) in p.terms() {
            out += (self.f)(m)?.scale(c);
        }
        Ok(out)
    }
}

/// One slot of a literal term: `∂^derivs(pullback(input[slot]))`.
#[derive(Clone)]
pub struct SlotFactor {
    pub slot: usize,
    pub pullback: Option<Arc<MorphismSpec>>,
    pub derivs: Vec<(Var, u32)>,
}

impl SlotFactor {
    pub fn plain(slot: usize) -> SlotFactor {
        SlotFactor {
            slot,
            pullback: None,
            derivs: Vec::new(),
        }
    }

    pub fn deriv(slot: usize, derivs: &[(Var, u32)]) -> SlotFactor {
        SlotFactor {
            slot,
            pullback: None,
            derivs: derivs.iter().copied().filter(|&(_, n)| n > 0).collect(),
        }
    }

    fn eval(&self, inputs: &[LaurentPoly]) -> Result<LaurentPoly> {
        let mut p = match &self.pullback {
            Some(m) => m.apply(&inputs[self.slot])?,
            None => inputs[self.slot].clone(),
        };
        for &(x, n) in &self.derivs {
            p = p.derivative(x, n);
        }
        Ok(p)
    }
}

/// Expression tree of a multilinear cochain. Every slot occurs exactly once
/// along each summand, which makes evaluation multilinear by construction.
#[derive(Clone)]
pub enum Node {
    Zero,
    Slot(usize),
    /// `coeff · Π factors`, the literal polydifferential form.
    Term {
        coeff: LaurentPoly,
        factors: Vec<SlotFactor>,
    },
    Product(Vec<Node>),
    CoeffMul(LaurentPoly, Box<Node>),
    Deriv(Var, u32, Box<Node>),
    Pullback(Arc<MorphismSpec>, Box<Node>),
    Sum(Vec<Node>),
    Scale(Rational, Box<Node>),
    /// Insertion: evaluate `args` and feed them to the inner cochain.
    Apply(Cochain, Vec<Node>),
    Map(Arc<MonomialMap>, Box<Node>),
}

impl Node {
    /// Multiset of slots used, `None` for the zero node (compatible with any
    /// slot set).
    fn slots(&self) -> Result<Option<Vec<usize>>> {
        fn disjoint_union(parts: Vec<Vec<usize>>) -> Result<Vec<usize>> {
            let mut all: Vec<usize> = parts.into_iter().flatten().collect();
            all.sort_unstable();
            if all.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NonLinear(format!("slot repeated in a product: {all:?}")));
            }
            Ok(all)
        }
        Ok(match self {
            Node::Zero => None,
            Node::Slot(i) => Some(vec![*i]),
            Node::Term { factors, .. } => Some(disjoint_union(
                factors.iter().map(|f| vec![f.slot]).collect(),
            )?),
            Node::Product(parts) => {
                let mut sets = Vec::new();
                for p in parts {
                    match p.slots()? {
                        None => return Ok(None),
                        Some(s) => sets.push(s),
                    }
                }
                Some(disjoint_union(sets)?)
            }
            Node::CoeffMul(_, n)
            | Node::Deriv(_, _, n)
            | Node::Pullback(_, n)
            | Node::Scale(_, n)
            | Node::Map(_, n) => n.slots()?,
            Node::Sum(parts) => {
                let mut common: Option<Vec<usize>> = None;
                for p in parts {
                    if let Some(s) = p.slots()? {
                        match &common {
                            None => common = Some(s),
                            Some(c) if *c == s => {}
                            Some(c) => {
                                return Err(Error::NonLinear(format!(
                                    "summands use different slots: {c:?} vs {s:?}"
                                )))
                            }
                        }
                    }
                }
                common
            }
            Node::Apply(op, args) => {
                if args.len() != op.arity() {
                    return Err(Error::ArityMismatch {
                        expected: op.arity(),
                        got: args.len(),
                    });
                }
                if op.is_structurally_zero() {
                    return Ok(None);
                }
                let mut sets = Vec::new();
                for a in args {
                    match a.slots()? {
                        None => return Ok(None),
                        Some(s) => sets.push(s),
                    }
                }
                Some(disjoint_union(sets)?)
            }
        })
    }

    fn eval(&self, inputs: &[LaurentPoly]) -> Result<LaurentPoly> {
        match self {
            Node::Zero => Ok(LaurentPoly::zero()),
            Node::Slot(i) => Ok(inputs[*i].clone()),
            Node::Term { coeff, factors } => {
                let mut acc = coeff.clone();
                for f in factors {
                    if acc.is_zero() {
                        break;
                    }
                    acc = &acc * &f.eval(inputs)?;
                }
                Ok(acc)
            }
            Node::Product(parts) => {
                let mut acc = LaurentPoly::one();
                for p in parts {
                    acc = &acc * &p.eval(inputs)?;
                    if acc.is_zero() {
                        break;
                    }
                }
                Ok(acc)
            }
            Node::CoeffMul(c, n) => Ok(c * &n.eval(inputs)?),
            Node::Deriv(x, k, n) => Ok(n.eval(inputs)?.derivative(*x, *k)),
            Node::Pullback(m, n) => m.apply(&n.eval(inputs)?),
            Node::Sum(parts) => {
                let mut acc = LaurentPoly::zero();
                for p in parts {
                    acc += p.eval(inputs)?;
                }
                Ok(acc)
            }
            Node::Scale(c, n) => Ok(n.eval(inputs)?.scale(c)),
            Node::Apply(op, args) => {
                let vals = args
                    .iter()
                    .map(|a| a.eval(inputs))
                    .collect::<Result<Vec<_>>>()?;
                if vals.iter().any(LaurentPoly::is_zero) {
                    return Ok(LaurentPoly::zero());
                }
                op.body.eval(&vals)
            }
            Node::Map(m, n) => m.apply(&n.eval(inputs)?),
        }
    }

    /// Renumbers slots through `f`.
    fn reslot(&self, f: &impl Fn(usize) -> usize) -> Node {
        match self {
            Node::Zero => Node::Zero,
            Node::Slot(i) => Node::Slot(f(*i)),
            Node::Term { coeff, factors } => Node::Term {
                coeff: coeff.clone(),
                factors: factors
                    .iter()
                    .map(|s| SlotFactor {
                        slot: f(s.slot),
                        ..s.clone()
                    })
                    .collect(),
            },
            Node::Product(ps) => Node::Product(ps.iter().map(|p| p.reslot(f)).collect()),
            Node::CoeffMul(c, n) => Node::CoeffMul(c.clone(), Box::new(n.reslot(f))),
            Node::Deriv(x, k, n) => Node::Deriv(*x, *k, Box::new(n.reslot(f))),
            Node::Pullback(m, n) => Node::Pullback(m.clone(), Box::new(n.reslot(f))),
            Node::Sum(ps) => Node::Sum(ps.iter().map(|p| p.reslot(f)).collect()),
            Node::Scale(c, n) => Node::Scale(c.clone(), Box::new(n.reslot(f))),
            Node::Apply(op, args) => Node::Apply(op.clone(), args.iter().map(|a| a.reslot(f)).collect()),
            Node::Map(m, n) => Node::Map(m.clone(), Box::new(n.reslot(f))),
        }
    }
}

/// A multilinear map `A_{s_0} ⊗ ... ⊗ A_{s_{q-1}} → A_t` given as an
/// expression tree. Its shifted degree is `q - 1`.
#[derive(Clone)]
pub struct Cochain {
    sources: Vec<AlgRef>,
    target: AlgRef,
    body: Arc<Node>,
}

/// Source and target algebra ids of a cochain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub sources: Vec<String>,
    pub target: String,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.sources.join(" ⊗ "), self.target)
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain({})", self.signature())
    }
}

impl Cochain {
    /// Validates slot linearity: every slot `0..sources.len()` must appear
    /// exactly once in every summand.
    pub fn new(sources: Vec<AlgRef>, target: AlgRef, body: Node) -> Result<Cochain> {
        if let Some(mut used) = body.slots()? {
            used.sort_unstable();
            let expected: Vec<usize> = (0..sources.len()).collect();
            if used != expected {
                return Err(Error::NonLinear(format!(
                    "body uses slots {used:?}, signature has arity {}",
                    sources.len()
                )));
            }
        }
        Ok(Cochain {
            sources,
            target,
            body: Arc::new(body),
        })
    }

    fn trusted(sources: Vec<AlgRef>, target: AlgRef, body: Node) -> Cochain {
        Cochain {
            sources,
            target,
            body: Arc::new(body),
        }
    }

    pub fn zero(sources: Vec<AlgRef>, target: AlgRef) -> Cochain {
        Cochain::trusted(sources, target, Node::Zero)
    }

    /// The unary identity cochain on `a`.
    pub fn identity(a: &AlgRef) -> Cochain {
        Cochain::trusted(vec![a.clone()], a.clone(), Node::Slot(0))
    }

    /// The commutative product of `arity` inputs.
    pub fn product(a: &AlgRef, arity: usize) -> Cochain {
        Cochain::trusted(
            vec![a.clone(); arity],
            a.clone(),
            Node::Product((0..arity).map(Node::Slot).collect()),
        )
    }

    /// The unary cochain `s ↦ m(s)`.
    pub fn morphism(m: &Arc<MorphismSpec>) -> Cochain {
        Cochain::trusted(
            vec![m.source.clone()],
            m.target.clone(),
            Node::Pullback(m.clone(), Box::new(Node::Slot(0))),
        )
    }

    /// The unary cochain `s ↦ map(s)` for a monomial-wise linear map.
    pub fn linear_map(source: &AlgRef, target: &AlgRef, map: Arc<MonomialMap>) -> Cochain {
        Cochain::trusted(
            vec![source.clone()],
            target.clone(),
            Node::Map(map, Box::new(Node::Slot(0))),
        )
    }

    /// A sum of literal terms `coeff · Π ∂^derivs(pullback(input))`.
    pub fn from_terms(
        sources: Vec<AlgRef>,
        target: AlgRef,
        terms: Vec<(LaurentPoly, Vec<SlotFactor>)>,
    ) -> Result<Cochain> {
        let nodes: Vec<Node> = terms
            .into_iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(coeff, factors)| Node::Term { coeff, factors })
            .collect();
        let body = match nodes.len() {
            0 => Node::Zero,
            _ => Node::Sum(nodes),
        };
        Cochain::new(sources, target, body)
    }

    pub fn arity(&self) -> usize {
        self.sources.len()
    }

    /// Shifted degree `m = arity - 1`.
    pub fn degree(&self) -> i64 {
        self.sources.len() as i64 - 1
    }

    pub fn sources(&self) -> &[AlgRef] {
        &self.sources
    }

    pub fn target(&self) -> &AlgRef {
        &self.target
    }

    pub fn body(&self) -> &Node {
        &self.body
    }

    pub fn signature(&self) -> Signature {
        Signature {
            sources: self.sources.iter().map(|a| a.id.clone()).collect(),
            target: self.target.id.clone(),
        }
    }

    pub fn same_signature(&self, other: &Cochain) -> bool {
        self.target.id == other.target.id
            && self.sources.len() == other.sources.len()
            && self.sources.iter().zip(&other.sources).all(|(a, b)| a.id == b.id)
    }

    pub fn is_structurally_zero(&self) -> bool {
        matches!(*self.body, Node::Zero)
    }

    /// Evaluates on concrete inputs, checking arity and source membership.
    pub fn evaluate(&self, inputs: &[LaurentPoly]) -> Result<LaurentPoly> {
        if inputs.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: inputs.len(),
            });
        }
        for (a, p) in self.sources.iter().zip(inputs) {
            a.check(p)?;
        }
        self.body.eval(inputs)
    }

    /// Evaluation without the membership check, for grid loops whose inputs
    /// are generated from the source cones.
    pub fn eval_unchecked(&self, inputs: &[LaurentPoly]) -> Result<LaurentPoly> {
        self.body.eval(inputs)
    }

    fn require_same(&self, other: &Cochain) -> Result<()> {
        if self.same_signature(other) {
            Ok(())
        } else {
            Err(Error::SpliceMismatch(format!(
                "cannot add {} and {}",
                self.signature(),
                other.signature()
            )))
        }
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.require_same(other)?;
        Ok(match (&*self.body, &*other.body) {
            (Node::Zero, _) => other.clone(),
            (_, Node::Zero) => self.clone(),
            _ => Cochain::trusted(
                self.sources.clone(),
                self.target.clone(),
                Node::Sum(vec![(*self.body).clone(), (*other.body).clone()]),
            ),
        })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.neg())
    }

    /// Sum of cochains sharing one signature.
    pub fn sum(sources: Vec<AlgRef>, target: AlgRef, parts: &[Cochain]) -> Result<Cochain> {
        let zero = Cochain::zero(sources, target);
        let mut nodes = Vec::new();
        for p in parts {
            zero.require_same(p)?;
            if !p.is_structurally_zero() {
                nodes.push((*p.body).clone());
            }
        }
        Ok(match nodes.len() {
            0 => zero,
            1 => Cochain::trusted(zero.sources, zero.target, nodes.pop().expect("one node")),
            _ => Cochain::trusted(zero.sources, zero.target, Node::Sum(nodes)),
        })
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        if c.is_zero() || self.is_structurally_zero() {
            return Cochain::zero(self.sources.clone(), self.target.clone());
        }
        if c.is_one() {
            return self.clone();
        }
        Cochain::trusted(
            self.sources.clone(),
            self.target.clone(),
            Node::Scale(c.clone(), Box::new((*self.body).clone())),
        )
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&-Rational::one())
    }

    /// Multiplies the output by a fixed element of the target.
    pub fn coeff_mul(&self, c: &LaurentPoly) -> Cochain {
        Cochain::trusted(
            self.sources.clone(),
            self.target.clone(),
            Node::CoeffMul(c.clone(), Box::new((*self.body).clone())),
        )
    }

    /// Post-composition with a morphism out of the target.
    pub fn then_morphism(&self, m: &Arc<MorphismSpec>) -> Result<Cochain> {
        if m.source.id != self.target.id {
            return Err(Error::SpliceMismatch(format!(
                "morphism `{}` starts at `{}`, cochain lands in `{}`",
                m.id, m.source.id, self.target.id
            )));
        }
        Ok(Cochain::trusted(
            self.sources.clone(),
            m.target.clone(),
            Node::Pullback(m.clone(), Box::new((*self.body).clone())),
        ))
    }

    /// Relabels the target algebra (e.g. from a Laurent localisation back to
    /// the polynomial algebra it is known to land in).
    pub fn with_target(&self, target: AlgRef) -> Cochain {
        Cochain::trusted(self.sources.clone(), target, (*self.body).clone())
    }

    /// `op ∘ (g_0 ⊗ ... ⊗ g_{n-1})`: inputs of the `g`'s are concatenated.
    pub fn compose(op: &Cochain, gs: &[Cochain]) -> Result<Cochain> {
        if gs.len() != op.arity() {
            return Err(Error::ArityMismatch {
                expected: op.arity(),
                got: gs.len(),
            });
        }
        let mut sources = Vec::new();
        let mut args = Vec::new();
        for (j, g) in gs.iter().enumerate() {
            if g.target.id != op.sources[j].id {
                return Err(Error::SpliceMismatch(format!(
                    "slot {j} of {} expects `{}`, got a cochain into `{}`",
                    op.signature(),
                    op.sources[j].id,
                    g.target.id
                )));
            }
            let off = sources.len();
            sources.extend(g.sources.iter().cloned());
            args.push(Node::Apply(g.clone(), (off..off + g.arity()).map(Node::Slot).collect()));
        }
        if op.is_structurally_zero() || gs.iter().any(Cochain::is_structurally_zero) {
            return Ok(Cochain::zero(sources, op.target.clone()));
        }
        Ok(Cochain::trusted(sources, op.target.clone(), Node::Apply(op.clone(), args)))
    }

    /// Permutes inputs: the result evaluated on `(s_0..s_{q-1})` equals
    /// `self` evaluated on `(s_{perm[0]}, ..., s_{perm[q-1]})`.
    pub fn permute_inputs(&self, perm: &[usize]) -> Result<Cochain> {
        if perm.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: perm.len(),
            });
        }
        let mut sources = vec![self.sources[0].clone(); self.arity()];
        for (j, &p) in perm.iter().enumerate() {
            sources[p] = self.sources[j].clone();
        }
        let body = self.body.reslot(&|j| perm[j]);
        Cochain::new(sources, self.target.clone(), body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlaurent::{parse_poly, Cone};

    fn poly_alg() -> AlgRef {
        Arc::new(AlgebraSpec::new("A", &[("z", Cone::NonNeg), ("u", Cone::NonNeg)]))
    }

    #[test]
    fn product_evaluates() {
        let a = poly_alg();
        let mu = Cochain::product(&a, 2);
        let r = mu.evaluate(&[parse_poly("z").unwrap(), parse_poly("u").unwrap()]).unwrap();
        assert_eq!(r, parse_poly("z*u").unwrap());
    }

    #[test]
    fn biderivation_literal() {
        let a = poly_alg();
        let (z, u) = (Var::new("z"), Var::new("u"));
        let zu = parse_poly("z*u").unwrap();
        let mu1 = Cochain::from_terms(
            vec![a.clone(), a.clone()],
            a.clone(),
            vec![
                (zu.clone(), vec![SlotFactor::deriv(0, &[(z, 1)]), SlotFactor::deriv(1, &[(u, 1)])]),
                (-zu, vec![SlotFactor::deriv(0, &[(u, 1)]), SlotFactor::deriv(1, &[(z, 1)])]),
            ],
        )
        .unwrap();
        let r = mu1
            .evaluate(&[parse_poly("z^2*u").unwrap(), parse_poly("z*u^3").unwrap()])
            .unwrap();
        assert_eq!(r, parse_poly("5*z^3*u^4").unwrap());
    }

    #[test]
    fn rejects_nonlinear_bodies() {
        let a = poly_alg();
        let body = Node::Product(vec![Node::Slot(0), Node::Slot(0)]);
        assert!(matches!(
            Cochain::new(vec![a.clone()], a.clone(), body),
            Err(Error::NonLinear(_))
        ));
        let body = Node::Sum(vec![Node::Slot(0), Node::Slot(1)]);
        assert!(Cochain::new(vec![a.clone(), a.clone()], a.clone(), body).is_err());
        let body = Node::Slot(0);
        assert!(Cochain::new(vec![a.clone(), a.clone()], a, body).is_err());
    }

    #[test]
    fn evaluate_checks_inputs() {
        let a = poly_alg();
        let mu = Cochain::product(&a, 2);
        assert!(matches!(
            mu.evaluate(&[LaurentPoly::one()]),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            mu.evaluate(&[parse_poly("z^-1").unwrap(), LaurentPoly::one()]),
            Err(Error::ConeViolation { .. })
        ));
    }

    #[test]
    fn permuted_inputs() {
        let a = poly_alg();
        let z = Var::new("z");
        let f = Cochain::from_terms(
            vec![a.clone(), a.clone()],
            a.clone(),
            vec![(LaurentPoly::one(), vec![SlotFactor::plain(0), SlotFactor::deriv(1, &[(z, 1)])])],
        )
        .unwrap();
        let g = f.permute_inputs(&[1, 0]).unwrap();
        let (p, q) = (parse_poly("u").unwrap(), parse_poly("z^2").unwrap());
        assert_eq!(
            g.evaluate(&[p.clone(), q.clone()]).unwrap(),
            f.evaluate(&[q, p]).unwrap()
        );
    }
}
