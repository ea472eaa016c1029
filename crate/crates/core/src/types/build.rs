//! Elaboration of type syntax into store nodes, including recursive binders.

use std::collections::{BTreeSet, HashMap};

use super::store::{TypeId, TypeStore};
use super::syntax::{TypeExpr, TypeExprKind};
use crate::error::{ContractivityError, ParseError};
use crate::types::base::{BaseDescriptor, Constant};

/// How `->` and `*` are read.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BuildMode {
    /// Plain constructors; `Bot` may be written.
    Raw,
    /// Interface position: `->` is `→⊥` and `*` is `×⊥`.
    Interface,
    /// Typecase position: `*` is `×⊥` and the only arrow is `Empty -> Any`.
    Test,
}

/// A function interface: a nonempty intersection of lifted arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interface {
    /// The whole intersection `⋀ T'_i →⊥ T_i`.
    pub ty: TypeId,
    /// The pairs `(T'_i, T_i)`, unlifted.
    pub arrows: Vec<(TypeId, TypeId)>,
}

impl Interface {
    pub fn from_arrows(store: &TypeStore, arrows: Vec<(TypeId, TypeId)>) -> Self {
        let ty = store.and_all(arrows.iter().map(|&(a, b)| store.lifted_arrow(a, b)));
        Interface { ty, arrows }
    }
}

struct Builder<'s> {
    store: &'s TypeStore,
    mode: BuildMode,
    /// Slots reserved by this builder that are still pending.
    reserved: Vec<TypeId>,
}

type Env = HashMap<String, TypeId>;

impl Builder<'_> {
    fn go(&mut self, e: &TypeExpr, env: &Env) -> Result<(TypeId, BTreeSet<TypeId>), ParseError> {
        let s = self.store;
        let none = BTreeSet::new;
        Ok(match &e.kind {
            TypeExprKind::Int => (s.int(), none()),
            TypeExprKind::Bool => (s.boolean(), none()),
            TypeExprKind::IntLit(n) => (s.constant(&Constant::Int(n.clone())), none()),
            TypeExprKind::BoolLit(b) => (s.bool_lit(*b), none()),
            TypeExprKind::Empty => (s.empty(), none()),
            TypeExprKind::Any => (s.any(), none()),
            TypeExprKind::Bot => {
                if self.mode != BuildMode::Raw {
                    return Err(self.mode_error(e, "`Bot` cannot be written here"));
                }
                (s.bot(), none())
            }
            TypeExprKind::Prod(a, b) => {
                let (a, _) = self.go(a, env)?;
                let (b, _) = self.go(b, env)?;
                let t = match self.mode {
                    BuildMode::Raw => s.prod(a, b),
                    BuildMode::Interface | BuildMode::Test => s.lifted_prod(a, b),
                };
                (t, none())
            }
            TypeExprKind::Arrow(a, b) => {
                let (a, _) = self.go(a, env)?;
                let (b, _) = self.go(b, env)?;
                let t = match self.mode {
                    BuildMode::Raw => s.arrow(a, b),
                    BuildMode::Interface => s.lifted_arrow(a, b),
                    BuildMode::Test => {
                        if a != s.empty() || b != s.any() {
                            return Err(
                                self.mode_error(e, "the only arrow allowed is `Empty -> Any`")
                            );
                        }
                        s.top_arrow()
                    }
                };
                (t, none())
            }
            TypeExprKind::Or(a, b) => self.binop(a, b, env, |s, x, y| s.or(x, y))?,
            TypeExprKind::And(a, b) => self.binop(a, b, env, |s, x, y| s.and(x, y))?,
            TypeExprKind::Diff(a, b) => self.binop(a, b, env, |s, x, y| s.diff(x, y))?,
            TypeExprKind::Not(a) => {
                let (a, u) = self.go(a, env)?;
                (s.neg(a), u)
            }
            TypeExprKind::Var(name) => match env.get(name) {
                Some(&slot) => {
                    let mut u = none();
                    if s.is_pending(slot) {
                        u.insert(slot);
                    }
                    (slot, u)
                }
                None => {
                    return Err(ParseError::UnboundTypeVariable {
                        line: e.line,
                        col: e.col,
                        name: name.clone(),
                    })
                }
            },
            TypeExprKind::Rec(name, body) => {
                let slot = s.reserve();
                self.reserved.push(slot);
                let mut inner = env.clone();
                inner.insert(name.clone(), slot);
                let (b, mut u) = self.go(body, &inner)?;
                if u.remove(&slot) {
                    return Err(ParseError::Contractivity {
                        line: e.line,
                        col: e.col,
                        binder: name.clone(),
                    });
                }
                self.reserved.retain(|&r| r != slot);
                if !s.reachable(b).contains(&slot) {
                    s.abandon(slot);
                    (b, u)
                } else {
                    s.define(slot, s.node(b));
                    (slot, u)
                }
            }
        })
    }

    fn binop(
        &mut self,
        a: &TypeExpr,
        b: &TypeExpr,
        env: &Env,
        f: impl Fn(&TypeStore, TypeId, TypeId) -> TypeId,
    ) -> Result<(TypeId, BTreeSet<TypeId>), ParseError> {
        let (a, mut ua) = self.go(a, env)?;
        let (b, ub) = self.go(b, env)?;
        ua.extend(ub);
        Ok((f(self.store, a, b), ua))
    }

    fn mode_error(&self, e: &TypeExpr, message: &str) -> ParseError {
        let (line, col, message) = (e.line, e.col, message.to_string());
        match self.mode {
            BuildMode::Test => ParseError::TestType { line, col, message },
            _ => ParseError::Interface { line, col, message },
        }
    }

    /// Releases slots left pending by an early error.
    fn cleanup(&mut self) {
        for slot in self.reserved.drain(..) {
            self.store.abandon(slot);
        }
    }
}

/// Elaborates a closed type expression.
pub fn build_type(store: &TypeStore, e: &TypeExpr, mode: BuildMode) -> Result<TypeId, ParseError> {
    let mut b = Builder {
        store,
        mode,
        reserved: Vec::new(),
    };
    let r = b.go(e, &Env::new());
    b.cleanup();
    r.map(|(t, _)| t)
}

/// Elaborates an interface: an `&`-chain of arrows whose components are
/// read with lifted constructors.
pub fn build_interface(store: &TypeStore, e: &TypeExpr) -> Result<Interface, ParseError> {
    let mut arrows = Vec::new();
    for c in e.conjuncts() {
        match &c.kind {
            TypeExprKind::Arrow(a, b) => {
                let a = build_type(store, a, BuildMode::Interface)?;
                let b = build_type(store, b, BuildMode::Interface)?;
                arrows.push((a, b));
            }
            _ => {
                return Err(ParseError::Interface {
                    line: c.line,
                    col: c.col,
                    message: "expected an intersection of arrows".into(),
                })
            }
        }
    }
    Ok(Interface::from_arrows(store, arrows))
}

/// Solves a system of recursive equations `X_i = t_i` (raw constructors).
/// Returns one id per equation, in order.
pub fn mk_rec(
    store: &TypeStore,
    eqs: &[(&str, TypeExpr)],
) -> Result<Vec<TypeId>, ContractivityError> {
    let slots: Vec<TypeId> = eqs.iter().map(|_| store.reserve()).collect();
    let env: Env = eqs
        .iter()
        .zip(&slots)
        .map(|((n, _), &s)| (n.to_string(), s))
        .collect();
    let mut b = Builder {
        store,
        mode: BuildMode::Raw,
        reserved: Vec::new(),
    };
    let mut bodies = Vec::new();
    for (name, e) in eqs {
        match b.go(e, &env) {
            Ok(r) => bodies.push(r),
            Err(_) => {
                b.cleanup();
                slots.iter().for_each(|&s| store.abandon(s));
                return Err(ContractivityError {
                    binder: name.to_string(),
                });
            }
        }
    }
    let index: HashMap<TypeId, usize> = slots.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    // Unguarded dependencies between equations must be acyclic.
    let deps: Vec<Vec<usize>> = bodies
        .iter()
        .map(|(_, u)| u.iter().filter_map(|s| index.get(s).copied()).collect())
        .collect();
    let mut state = vec![0u8; eqs.len()];
    let mut order = Vec::new();
    fn visit(
        i: usize,
        deps: &[Vec<usize>],
        state: &mut [u8],
        order: &mut Vec<usize>,
    ) -> Result<(), usize> {
        match state[i] {
            1 => return Err(i),
            2 => return Ok(()),
            _ => {}
        }
        state[i] = 1;
        for &j in &deps[i] {
            visit(j, deps, state, order)?;
        }
        state[i] = 2;
        order.push(i);
        Ok(())
    }
    for i in 0..eqs.len() {
        if let Err(bad) = visit(i, &deps, &mut state, &mut order) {
            slots.iter().for_each(|&s| store.abandon(s));
            return Err(ContractivityError {
                binder: eqs[bad].0.to_string(),
            });
        }
    }
    for i in order {
        store.define(slots[i], store.node(bodies[i].0));
    }
    Ok(slots)
}

/// Basic type of a constant literal, as used by the typechecker.
pub fn constant_type(store: &TypeStore, c: &Constant) -> TypeId {
    store.basic(BaseDescriptor::singleton(c))
}
