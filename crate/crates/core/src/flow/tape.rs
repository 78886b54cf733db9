//! Expression tape recorded from the generic vector-field code.

use std::cell::RefCell;
use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::rc::Rc;

use crate::problem::VectorField;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    /// Constant, stored as raw bits so nodes can be hashed.
    Const(u64),
    Var(usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Sqr(usize),
    Div(usize, usize),
    Neg(usize),
}

#[derive(Default)]
struct Builder {
    nodes: Vec<Node>,
    seen: HashMap<Node, usize>,
}

impl Builder {
    fn push(&mut self, n: Node) -> usize {
        if let Some(&id) = self.seen.get(&n) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(n);
        self.seen.insert(n, id);
        id
    }
}

#[derive(Clone)]
struct Rec {
    id: usize,
    b: Rc<RefCell<Builder>>,
}

impl Rec {
    fn node(&self, n: Node) -> Rec {
        let id = self.b.borrow_mut().push(n);
        Rec {
            id,
            b: self.b.clone(),
        }
    }
}

impl Add for Rec {
    type Output = Rec;
    fn add(self, r: Rec) -> Rec {
        self.node(Node::Add(self.id, r.id))
    }
}

impl Sub for Rec {
    type Output = Rec;
    fn sub(self, r: Rec) -> Rec {
        self.node(Node::Sub(self.id, r.id))
    }
}

impl Mul for Rec {
    type Output = Rec;
    fn mul(self, r: Rec) -> Rec {
        if self.id == r.id {
            self.node(Node::Sqr(self.id))
        } else {
            self.node(Node::Mul(self.id, r.id))
        }
    }
}

impl Div for Rec {
    type Output = Rec;
    fn div(self, r: Rec) -> Rec {
        self.node(Node::Div(self.id, r.id))
    }
}

impl Neg for Rec {
    type Output = Rec;
    fn neg(self) -> Rec {
        self.node(Node::Neg(self.id))
    }
}

impl Scalar for Rec {
    fn cst(&self, c: f64) -> Rec {
        self.node(Node::Const(c.to_bits()))
    }
}

/// Straight-line program for the six field components, in topological order.
#[derive(Clone, Debug)]
pub struct Tape {
    pub(crate) nodes: Vec<Node>,
    pub(crate) outputs: [usize; 6],
}

impl Tape {
    pub fn record(field: &VectorField) -> Tape {
        let b = Rc::new(RefCell::new(Builder::default()));
        let vars: [Rec; 6] = std::array::from_fn(|i| {
            let id = b.borrow_mut().push(Node::Var(i));
            Rec { id, b: b.clone() }
        });
        let out = field.eval(&vars);
        let outputs = std::array::from_fn(|i| out[i].id);
        drop(out);
        drop(vars);
        let nodes = Rc::try_unwrap(b)
            .ok()
            .expect("recorder handles dropped")
            .into_inner()
            .nodes;
        Tape { nodes, outputs }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Plain evaluation, used to cross-check the tape against the field.
    pub fn eval<T: Scalar>(&self, x: &[T; 6]) -> [T; 6] {
        let mut v: Vec<T> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let val = match *n {
                Node::Const(bits) => x[0].cst(f64::from_bits(bits)),
                Node::Var(i) => x[i].clone(),
                Node::Add(a, b) => v[a].clone() + v[b].clone(),
                Node::Sub(a, b) => v[a].clone() - v[b].clone(),
                Node::Mul(a, b) => v[a].clone() * v[b].clone(),
                Node::Sqr(a) => v[a].clone() * v[a].clone(),
                Node::Div(a, b) => v[a].clone() / v[b].clone(),
                Node::Neg(a) => -v[a].clone(),
            };
            v.push(val);
        }
        std::array::from_fn(|i| v[self.outputs[i]].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{example1, example2};

    #[test]
    fn tape_matches_direct_evaluation() {
        for p in [example1(), example2()] {
            let t = Tape::record(&p.field);
            let x = [1e-4, 2e-4, -3e-4, 5e-5, -7.5, -16.25];
            let a = t.eval(&x);
            let b = p.field.eval(&x);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn common_subexpressions_are_shared() {
        let t = Tape::record(&example1().field);
        let sq = t.nodes.iter().filter(|n| matches!(n, Node::Sqr(4))).count();
        assert_eq!(sq, 1);
    }
}
