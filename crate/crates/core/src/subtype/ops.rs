//! Operators derived from the decision procedure: application, domains,
//! projections and the disjoint decompositions of interfaces and products.

use thiserror::Error;

use super::DnfLine;
use crate::types::{TypeId, TypeStore};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("not a function")]
    NotAFunction,
    #[error("argument outside the function's domain")]
    DomainMismatch,
    #[error("not a pair")]
    NotAPair,
}

fn nonempty_lines(store: &TypeStore, lines: &[DnfLine]) -> Vec<DnfLine> {
    lines
        .iter()
        .filter(|l| !store.is_empty(store.line_type(l)))
        .cloned()
        .collect()
}

fn arrow_line_parts(store: &TypeStore, l: &DnfLine) -> Vec<(TypeId, TypeId)> {
    if l.pos.is_empty() {
        vec![(store.empty(), store.any())]
    } else {
        l.pos.iter().map(|&p| store.arrow_parts(p)).collect()
    }
}

/// Nonempty arrow lines of `tf ∖ ⊥`, or `NotAFunction`.
fn function_lines(store: &TypeStore, tf: TypeId) -> Result<Vec<Vec<(TypeId, TypeId)>>, OpError> {
    let f = store.diff(tf, store.bot());
    if !store.subtype(f, store.top_arrow()) {
        return Err(OpError::NotAFunction);
    }
    let lines = nonempty_lines(store, &store.kind_split(f).arrow);
    Ok(lines.iter().map(|l| arrow_line_parts(store, l)).collect())
}

/// Largest argument type accepted by every function of type `tf ∖ ⊥`.
pub fn domain_of(store: &TypeStore, tf: TypeId) -> Result<TypeId, OpError> {
    let lines = function_lines(store, tf)?;
    Ok(store.and_all(
        lines
            .iter()
            .map(|p| store.or_all(p.iter().map(|&(a, _)| a))),
    ))
}

/// Least `r` such that `tf ∖ ⊥ ≤ targ → r`. The result is not lifted.
pub fn apply_type(store: &TypeStore, tf: TypeId, targ: TypeId) -> Result<TypeId, OpError> {
    let lines = function_lines(store, tf)?;
    let dom = store.and_all(
        lines
            .iter()
            .map(|p| store.or_all(p.iter().map(|&(a, _)| a))),
    );
    if !store.subtype(targ, dom) {
        return Err(OpError::DomainMismatch);
    }
    let mut out = Vec::new();
    for p in &lines {
        apply_line(
            store,
            targ,
            p,
            0,
            store.empty(),
            store.any(),
            false,
            &mut out,
        );
    }
    Ok(store.or_all(out))
}

/// Enumerates the splits of `p` into `Q` (domains accumulated in `dom_q`)
/// and the rest (codomains accumulated in `cod_r`), collecting `cod_r` for
/// every proper `Q` that does not cover `s`.
#[allow(clippy::too_many_arguments)]
fn apply_line(
    store: &TypeStore,
    s: TypeId,
    p: &[(TypeId, TypeId)],
    i: usize,
    dom_q: TypeId,
    cod_r: TypeId,
    some_left_out: bool,
    out: &mut Vec<TypeId>,
) {
    if store.subtype(s, dom_q) || store.is_empty(cod_r) {
        return;
    }
    if i == p.len() {
        if some_left_out {
            out.push(cod_r);
        }
        return;
    }
    let (a, b) = p[i];
    apply_line(
        store,
        s,
        p,
        i + 1,
        store.or(dom_q, a),
        cod_r,
        some_left_out,
        out,
    );
    apply_line(store, s, p, i + 1, dom_q, store.and(cod_r, b), true, out);
}

/// Splits `a × b ∖ ⋃neg` into disjoint nonempty rectangles.
fn rectangles(
    store: &TypeStore,
    a: TypeId,
    b: TypeId,
    neg: &[(TypeId, TypeId)],
    out: &mut Vec<(TypeId, TypeId)>,
) {
    if store.is_empty(a) || store.is_empty(b) {
        return;
    }
    let Some((&(c, d), rest)) = neg.split_first() else {
        out.push((a, b));
        return;
    };
    rectangles(store, store.diff(a, c), b, rest, out);
    rectangles(store, store.and(a, c), store.diff(b, d), rest, out);
}

/// Product atoms whose union is `t`. Requires `t ≤ 1 × 1`.
pub fn product_decompose(store: &TypeStore, t: TypeId) -> Result<Vec<(TypeId, TypeId)>, OpError> {
    if !store.subtype(t, store.top_prod()) {
        return Err(OpError::NotAPair);
    }
    let mut out = Vec::new();
    for l in store.kind_split(t).prod {
        let a = store.and_all(l.pos.iter().map(|&p| store.prod_parts(p).0));
        let b = store.and_all(l.pos.iter().map(|&p| store.prod_parts(p).1));
        let neg: Vec<(TypeId, TypeId)> = l.neg.iter().map(|&n| store.prod_parts(n)).collect();
        rectangles(store, a, b, &neg, &mut out);
    }
    Ok(out)
}

/// Least `t_i` such that `t ∖ ⊥ ≤ t_1 × t_2`. The result is not lifted.
pub fn proj_type(store: &TypeStore, i: u8, t: TypeId) -> Result<TypeId, OpError> {
    let p = store.diff(t, store.bot());
    let rects = product_decompose(store, p)?;
    Ok(store.or_all(rects.into_iter().map(|(a, b)| if i == 1 { a } else { b })))
}

/// The arrows `(dom, cod)` of a type that is a plain intersection of arrows.
pub fn arrows_of(store: &TypeStore, t: TypeId) -> Option<Vec<(TypeId, TypeId)>> {
    let d = store.dnf(t);
    match d.lines.as_slice() {
        [l] if l.neg.is_empty() && !l.pos.is_empty() => l
            .pos
            .iter()
            .map(|&p| {
                matches!(store.node(p), crate::types::TypeNode::Arrow(..))
                    .then(|| store.arrow_parts(p))
            })
            .collect(),
        _ => None,
    }
}

/// Splits `within` by each of `ts`: every nonempty region together with the
/// indices of the `ts` that contain it. Regions are pairwise disjoint.
pub fn partition(store: &TypeStore, ts: &[TypeId], within: TypeId) -> Vec<(TypeId, Vec<usize>)> {
    let mut regions = vec![(within, Vec::new())];
    if store.is_empty(within) {
        return Vec::new();
    }
    for (j, &t) in ts.iter().enumerate() {
        let mut next = Vec::with_capacity(regions.len() * 2);
        for (r, idx) in regions {
            let inside = store.and(r, t);
            let outside = store.diff(r, t);
            if !store.is_empty(inside) {
                let mut idx2 = idx.clone();
                idx2.push(j);
                next.push((inside, idx2));
            }
            if !store.is_empty(outside) {
                next.push((outside, idx));
            }
        }
        regions = next;
    }
    regions
}

/// Rewrites `⋀ t'_i → t_i` as arrows with pairwise disjoint domains:
/// one `(s_I', u_I')` per nonempty cell of the domains, or the top arrow
/// when every domain is empty.
pub fn interface_disjoint(store: &TypeStore, arrows: &[(TypeId, TypeId)]) -> Vec<(TypeId, TypeId)> {
    let doms: Vec<TypeId> = arrows.iter().map(|&(a, _)| a).collect();
    let cells: Vec<(TypeId, TypeId)> = partition(store, &doms, store.any())
        .into_iter()
        .filter(|(_, idx)| !idx.is_empty())
        .map(|(s, idx)| (s, store.and_all(idx.iter().map(|&i| arrows[i].1))))
        .collect();
    if cells.is_empty() && !arrows.is_empty() {
        // Every domain is empty: the interface is the top arrow.
        return vec![(store.empty(), store.any())];
    }
    cells
}

fn equal_or_disjoint(store: &TypeStore, ts: &[TypeId]) -> bool {
    ts.iter().enumerate().all(|(i, &a)| {
        ts[i + 1..]
            .iter()
            .all(|&b| store.equiv(a, b) || store.disjoint(a, b))
    })
}

/// Refines product atoms so that, on each side, any two components are
/// equivalent or disjoint. The union is preserved and each output atom lies
/// below some input atom.
pub fn make_fully_disjoint(store: &TypeStore, pi: &[(TypeId, TypeId)]) -> Vec<(TypeId, TypeId)> {
    let pi: Vec<(TypeId, TypeId)> = pi
        .iter()
        .copied()
        .filter(|&(a, b)| !store.is_empty(a) && !store.is_empty(b))
        .collect();
    let lefts: Vec<TypeId> = pi.iter().map(|p| p.0).collect();
    let rights: Vec<TypeId> = pi.iter().map(|p| p.1).collect();
    if equal_or_disjoint(store, &lefts) && equal_or_disjoint(store, &rights) {
        return pi;
    }
    let left_regions = partition(store, &lefts, store.or_all(lefts.iter().copied()));
    let right_regions = partition(store, &rights, store.or_all(rights.iter().copied()));
    let mut out = Vec::new();
    for (l, s1) in &left_regions {
        for (r, s2) in &right_regions {
            if s1.iter().any(|j| s2.contains(j)) {
                out.push((*l, *r));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{parse_type, BuildMode};

    fn ty(s: &TypeStore, src: &str) -> TypeId {
        parse_type(s, src, BuildMode::Raw).unwrap()
    }

    #[test]
    fn overloaded_application() {
        let s = TypeStore::new();
        let f = ty(&s, "(Int -> Int) & (Bool -> Bool)");
        let r = apply_type(&s, f, s.int_lit(3)).unwrap();
        assert!(s.subtype(r, s.int()));
        let r = apply_type(&s, f, ty(&s, "Int | Bool")).unwrap();
        assert!(s.equiv(r, ty(&s, "Int | Bool")));
        let neg = ty(&s, "(tt -> ff) & (ff -> tt)");
        assert!(s.equiv(
            apply_type(&s, neg, s.bool_lit(true)).unwrap(),
            s.bool_lit(false)
        ));
        assert_eq!(
            apply_type(&s, f, ty(&s, "Any * Any")),
            Err(OpError::DomainMismatch)
        );
        assert_eq!(apply_type(&s, s.int(), s.int()), Err(OpError::NotAFunction));
    }

    #[test]
    fn domains_and_projections() {
        let s = TypeStore::new();
        let f = ty(&s, "(Int -> Int) & (Bool -> Bool)");
        assert!(s.equiv(domain_of(&s, f).unwrap(), ty(&s, "Int | Bool")));
        let p = ty(&s, "(Bot * Int) | Bot");
        assert!(s.equiv(proj_type(&s, 2, p).unwrap(), s.int()));
        let p = ty(&s, "(Int * Int) | (Bool * Bool)");
        assert!(s.equiv(proj_type(&s, 1, p).unwrap(), ty(&s, "Int | Bool")));
        assert_eq!(proj_type(&s, 1, s.int()), Err(OpError::NotAPair));
    }

    #[test]
    fn disjoint_interface_cells() {
        let s = TypeStore::new();
        let arrows = vec![
            (ty(&s, "Int | Bool"), s.int()),
            (s.boolean(), s.bool_lit(false)),
        ];
        let cells = interface_disjoint(&s, &arrows);
        assert_eq!(cells.len(), 2);
        let int_cell = cells.iter().find(|c| s.equiv(c.0, s.int())).unwrap();
        assert!(s.equiv(int_cell.1, s.int()));
        let bool_cell = cells.iter().find(|c| s.equiv(c.0, s.boolean())).unwrap();
        assert!(s.is_empty(bool_cell.1));
    }

    #[test]
    fn fully_disjoint_products() {
        let s = TypeStore::new();
        let single = vec![(s.int(), s.int())];
        assert_eq!(make_fully_disjoint(&s, &single), single);
        let overlapping = vec![
            (ty(&s, "Int | Bool"), s.int()),
            (s.int(), ty(&s, "Int | Bool")),
        ];
        let out = make_fully_disjoint(&s, &overlapping);
        let before = s.or_all(overlapping.iter().map(|&(a, b)| s.prod(a, b)));
        let after = s.or_all(out.iter().map(|&(a, b)| s.prod(a, b)));
        assert!(s.equiv(before, after));
        for (i, x) in out.iter().enumerate() {
            for y in &out[i + 1..] {
                assert!(s.equiv(x.0, y.0) || s.disjoint(x.0, y.0));
                assert!(s.equiv(x.1, y.1) || s.disjoint(x.1, y.1));
            }
        }
    }
}
