//! Printing expressions in the concrete syntax accepted by the parser.

use super::Expr;
use crate::types::{print_surface, print_type, TypeId, TypeStore};

const OPEN: u8 = 0;
const APP: u8 = 1;
const ATOM: u8 = 2;

fn surface(store: &TypeStore, t: TypeId) -> String {
    print_surface(store, t).unwrap_or_else(|| print_type(store, t))
}

pub fn print_expr(store: &TypeStore, e: &Expr) -> String {
    let mut out = String::new();
    go(store, e, OPEN, &mut out);
    out
}

fn go(store: &TypeStore, e: &Expr, need: u8, out: &mut String) {
    let own = match e {
        Expr::Var(_) | Expr::Const(_) | Expr::Pair(..) => ATOM,
        Expr::App(..) | Expr::Proj(..) => APP,
        Expr::Abstr(_) | Expr::Case(_) | Expr::Let(_) => OPEN,
    };
    if own < need {
        out.push('(');
        go(store, e, OPEN, out);
        out.push(')');
        return;
    }
    match e {
        Expr::Var(x) => out.push_str(x),
        Expr::Const(c) => out.push_str(&c.to_string()),
        Expr::Pair(a, b) => {
            out.push('(');
            go(store, a, OPEN, out);
            out.push_str(", ");
            go(store, b, OPEN, out);
            out.push(')');
        }
        Expr::App(f, a) => {
            go(store, f, APP, out);
            out.push(' ');
            go(store, a, ATOM, out);
        }
        Expr::Proj(i, a) => {
            out.push_str(if *i == 1 { "fst " } else { "snd " });
            go(store, a, ATOM, out);
        }
        Expr::Abstr(a) => {
            let arrows: Vec<String> = a
                .iface
                .arrows
                .iter()
                .map(|&(d, c)| surface(store, store.lifted_arrow(d, c)))
                .collect();
            let iface = if arrows.len() == 1 {
                arrows[0].clone()
            } else {
                arrows
                    .iter()
                    .map(|s| format!("({s})"))
                    .collect::<Vec<_>>()
                    .join(" & ")
            };
            out.push_str(&format!("fun {} ({} : {iface}) = ", a.f, a.x));
            go(store, &a.body, OPEN, out);
        }
        Expr::Case(c) => {
            out.push_str(&format!("case {} = ", c.x));
            go(store, &c.scrutinee, OPEN, out);
            out.push_str(&format!(" in {} ? ", surface(store, c.test)));
            go(store, &c.then_e, OPEN, out);
            out.push_str(" : ");
            go(store, &c.else_e, OPEN, out);
        }
        Expr::Let(l) => {
            out.push_str(&format!("let {} = ", l.x));
            go(store, &l.bound, OPEN, out);
            out.push_str(" in ");
            go(store, &l.body, OPEN, out);
        }
    }
}
