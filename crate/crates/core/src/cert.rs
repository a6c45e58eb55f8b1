//! Construction expressions: certificates of realizability.
//!
//! Text form is a prefix expression. Leaves are `K<n>`, `P<n>`, `C<n>`,
//! `Kpq<p>,<q>`, `St<n>`, `A<n>`, `E<n>` (the edgeless graph `nK_1`) and
//! descriptors such as `S{2}4`, which stand for a graph found by search.
//! Operators are `U(a,b)`, `J(a,b)` and `C(a)`.

use std::fmt;
use std::str::FromStr;

use crate::descriptor::{parse_prefix, SetDescriptor};
use crate::error::{CertificateError, GraphError};
use crate::graph::{Graph, GraphFamily};
use crate::spectra::{complement_spectrum, integer_spectrum, join_spectrum, union_spectrum, SpectrumMultiset};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstructionExpr {
    Base(GraphFamily),
    Union(Box<ConstructionExpr>, Box<ConstructionExpr>),
    Join(Box<ConstructionExpr>, Box<ConstructionExpr>),
    Complement(Box<ConstructionExpr>),
    Oracle(SetDescriptor),
}

use ConstructionExpr as E;

pub fn base(f: GraphFamily) -> ConstructionExpr {
    E::Base(f)
}

pub fn k1() -> ConstructionExpr {
    E::Base(GraphFamily::Complete(1))
}

/// `n K_1`.
pub fn empty(n: usize) -> ConstructionExpr {
    E::Base(GraphFamily::Empty(n))
}

pub fn union(a: ConstructionExpr, b: ConstructionExpr) -> ConstructionExpr {
    E::Union(Box::new(a), Box::new(b))
}

pub fn join(a: ConstructionExpr, b: ConstructionExpr) -> ConstructionExpr {
    E::Join(Box::new(a), Box::new(b))
}

pub fn complement(a: ConstructionExpr) -> ConstructionExpr {
    E::Complement(Box::new(a))
}

pub fn oracle(d: impl Into<SetDescriptor>) -> ConstructionExpr {
    E::Oracle(d.into())
}

impl ConstructionExpr {
    pub fn order(&self) -> usize {
        match self {
            E::Base(f) => f.order(),
            E::Union(a, b) | E::Join(a, b) => a.order() + b.order(),
            E::Complement(a) => a.order(),
            E::Oracle(d) => d.order(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            E::Base(_) | E::Oracle(_) => 1,
            E::Union(a, b) | E::Join(a, b) => 1 + a.depth().max(b.depth()),
            E::Complement(a) => 1 + a.depth(),
        }
    }

    /// Descriptors of all oracle leaves, left to right.
    pub fn oracles(&self) -> Vec<SetDescriptor> {
        let mut out = Vec::new();
        self.collect_oracles(&mut out);
        out
    }

    fn collect_oracles(&self, out: &mut Vec<SetDescriptor>) {
        match self {
            E::Base(_) => {}
            E::Union(a, b) | E::Join(a, b) => {
                a.collect_oracles(out);
                b.collect_oracles(out);
            }
            E::Complement(a) => a.collect_oracles(out),
            E::Oracle(d) => out.push(*d),
        }
    }

    /// Builds the graph, asking `resolve` for every oracle leaf.
    pub fn evaluate_with(
        &self,
        resolve: &mut dyn FnMut(&SetDescriptor) -> Option<Graph>,
    ) -> Result<Graph, CertificateError> {
        Ok(match self {
            E::Base(f) => f.build()?,
            E::Union(a, b) => a.evaluate_with(resolve)?.union(&b.evaluate_with(resolve)?)?,
            E::Join(a, b) => a.evaluate_with(resolve)?.join(&b.evaluate_with(resolve)?)?,
            E::Complement(a) => a.evaluate_with(resolve)?.complement(),
            E::Oracle(d) => {
                let g = resolve(d).ok_or_else(|| CertificateError::Unresolved(d.to_string()))?;
                if g.order() != d.order() {
                    return Err(CertificateError::Unresolved(format!("{d} resolved to a graph of order {}", g.order())));
                }
                g
            }
        })
    }

    /// Builds the graph; oracle leaves are an error.
    pub fn evaluate(&self) -> Result<Graph, CertificateError> {
        self.evaluate_with(&mut |_| None)
    }

    /// Spectrum predicted by the spectral calculus from the leaves alone:
    /// family leaves are computed exactly, oracle leaves contribute their
    /// target multiset.
    pub fn predicted_spectrum(&self) -> Result<SpectrumMultiset, CertificateError> {
        Ok(match self {
            E::Base(f) => integer_spectrum(&f.build()?).map_err(|_| CertificateError::NotIntegral)?,
            E::Union(a, b) => union_spectrum(&a.predicted_spectrum()?, &b.predicted_spectrum()?),
            E::Join(a, b) => join_spectrum(&a.predicted_spectrum()?, &b.predicted_spectrum()?)?,
            E::Complement(a) => complement_spectrum(&a.predicted_spectrum()?, a.order())?,
            E::Oracle(d) => d.expand(),
        })
    }
}

impl fmt::Display for ConstructionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            E::Base(fam) => match *fam {
                GraphFamily::Complete(n) => write!(f, "K{n}"),
                GraphFamily::Path(n) => write!(f, "P{n}"),
                GraphFamily::Cycle(n) => write!(f, "C{n}"),
                GraphFamily::CompleteBipartite(p, q) => write!(f, "Kpq{p},{q}"),
                GraphFamily::Star(n) => write!(f, "St{n}"),
                GraphFamily::AntiRegular(n) => write!(f, "A{n}"),
                GraphFamily::Empty(n) => write!(f, "E{n}"),
            },
            E::Union(a, b) => write!(f, "U({a},{b})"),
            E::Join(a, b) => write!(f, "J({a},{b})"),
            E::Complement(a) => write!(f, "C({a})"),
            E::Oracle(d) => write!(f, "{d}"),
        }
    }
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: impl Into<String>) -> CertificateError {
        CertificateError::Parse { position: self.pos, reason: reason.into() }
    }

    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), CertificateError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{token}'")))
        }
    }

    fn number(&mut self) -> Result<usize, CertificateError> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected a number"));
        }
        let v = self.rest()[..digits].parse().map_err(|_| self.error("number too large"))?;
        self.pos += digits;
        Ok(v)
    }

    fn family(&mut self, f: GraphFamily, start: usize) -> Result<ConstructionExpr, CertificateError> {
        f.validate().map_err(|e| match e {
            GraphError::InvalidFamily { reason, .. } => CertificateError::Parse { position: start, reason },
            other => CertificateError::Graph(other),
        })?;
        Ok(E::Base(f))
    }

    fn binary(&mut self) -> Result<(ConstructionExpr, ConstructionExpr), CertificateError> {
        self.expect("(")?;
        let a = self.expr()?;
        self.expect(",")?;
        let b = self.expr()?;
        self.expect(")")?;
        Ok((a, b))
    }

    fn expr(&mut self) -> Result<ConstructionExpr, CertificateError> {
        let start = self.pos;
        if self.rest().starts_with("S{") {
            let (d, used) = parse_prefix(self.rest(), self.pos).map_err(|e| match e {
                crate::error::DescriptorError::Parse { position, reason } => CertificateError::Parse { position, reason },
                crate::error::DescriptorError::Invalid(reason) => CertificateError::Parse { position: start, reason },
            })?;
            self.pos += used;
            return Ok(E::Oracle(d));
        }
        if self.eat("St") {
            let n = self.number()?;
            return self.family(GraphFamily::Star(n), start);
        }
        if self.eat("Kpq") {
            let p = self.number()?;
            self.expect(",")?;
            let q = self.number()?;
            return self.family(GraphFamily::CompleteBipartite(p, q), start);
        }
        if self.eat("U") {
            let (a, b) = self.binary()?;
            return Ok(union(a, b));
        }
        if self.eat("J") {
            let (a, b) = self.binary()?;
            return Ok(join(a, b));
        }
        if self.rest().starts_with("C(") {
            self.pos += 1;
            self.expect("(")?;
            let a = self.expr()?;
            self.expect(")")?;
            return Ok(complement(a));
        }
        let ctor: fn(usize) -> GraphFamily = if self.eat("K") {
            GraphFamily::Complete
        } else if self.eat("P") {
            GraphFamily::Path
        } else if self.eat("C") {
            GraphFamily::Cycle
        } else if self.eat("A") {
            GraphFamily::AntiRegular
        } else if self.eat("E") {
            GraphFamily::Empty
        } else {
            return Err(self.error("expected a graph, U(, J(, C( or a descriptor"));
        };
        let n = self.number()?;
        self.family(ctor(n), start)
    }
}

impl FromStr for ConstructionExpr {
    type Err = CertificateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { s, pos: 0 };
        let e = p.expr()?;
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(s: &str) -> SpectrumMultiset {
        s.parse().unwrap()
    }

    fn cert(s: &str) -> ConstructionExpr {
        s.parse().unwrap()
    }

    #[test]
    fn parse_render_examples() {
        let e = cert("J(U(K2,E2),K1)");
        assert_eq!(e, join(union(base(GraphFamily::Complete(2)), empty(2)), k1()));
        assert_eq!(e.to_string(), "J(U(K2,E2),K1)");
        assert_eq!(e.order(), 5);
        assert_eq!(cert("U(Kpq3,1,C4)").to_string(), "U(Kpq3,1,C4)");
        assert_eq!(cert("C(C5)"), complement(base(GraphFamily::Cycle(5))));
        assert_eq!(cert("J(S{2}4,St3)").oracles(), vec!["S{2}4".parse().unwrap()]);
    }

    #[test]
    fn parse_errors() {
        let pos = |s: &str| match s.parse::<ConstructionExpr>() {
            Err(CertificateError::Parse { position, .. }) => position,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("J(K1"), 4);
        assert_eq!(pos("X"), 0);
        assert_eq!(pos("U(K1,C2)"), 5);
        assert_eq!(pos("J(K1,S{1,1}3^2)"), 5);
        assert_eq!(pos("K1)"), 2);
    }

    #[test]
    fn evaluation_examples() {
        let g = cert("J(U(K2,E2),K1)").evaluate().unwrap();
        assert_eq!(integer_spectrum(&g).unwrap(), spec("0,1^2,3,5"));
        assert!(matches!(cert("J(S{2}3,K1)").evaluate(), Err(CertificateError::Unresolved(_))));
        let p3 = GraphFamily::Path(3).build().unwrap();
        let g = cert("J(S{2}3,K1)").evaluate_with(&mut |_| Some(p3.clone())).unwrap();
        assert_eq!(g.order(), 4);
        assert!(cert("J(S{2}3,K1)").evaluate_with(&mut |_| Some(Graph::empty(2).unwrap())).is_err());
    }

    #[test]
    fn predicted_spectrum_matches_direct() {
        for s in ["J(U(K2,E2),K1)", "J(K1,U(E2,P3))", "J(U(A5,E2),K1)", "C(J(K2,E2))", "U(C4,Kpq3,2)"] {
            let e = cert(s);
            assert_eq!(e.predicted_spectrum().unwrap(), integer_spectrum(&e.evaluate().unwrap()).unwrap(), "{s}");
        }
        assert!(matches!(cert("J(P4,K1)").predicted_spectrum(), Err(CertificateError::NotIntegral)));
    }

    fn arb_expr() -> impl Strategy<Value = ConstructionExpr> {
        let leaf = prop_oneof![
            (1usize..4).prop_map(|n| base(GraphFamily::Complete(n))),
            (1usize..4).prop_map(|n| base(GraphFamily::Path(n))),
            (3usize..5).prop_map(|n| base(GraphFamily::Cycle(n))),
            (1usize..3, 1usize..3).prop_map(|(p, q)| base(GraphFamily::CompleteBipartite(p, q))),
            (2usize..4).prop_map(|n| base(GraphFamily::Star(n))),
            (1usize..5).prop_map(|n| base(GraphFamily::AntiRegular(n))),
            (1usize..3).prop_map(empty),
            (1usize..4).prop_map(|i| oracle(SetDescriptor::single(i, 3).unwrap())),
        ];
        leaf.prop_recursive(4, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| union(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| join(a, b)),
                inner.prop_map(complement),
            ]
        })
    }

    proptest! {
        #[test]
        fn text_roundtrip(e in arb_expr()) {
            prop_assert_eq!(e.to_string().parse::<ConstructionExpr>().unwrap(), e);
        }
    }
}
