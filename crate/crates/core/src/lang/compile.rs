//! Compilation of source programs into the internal language.

use super::{Expr, Fresh};

/// `⌈ê⌉`: homomorphic except for typecases, whose scrutinee is bound by a
/// `let` to a fresh reserved name.
pub fn compile(e: &Expr) -> Expr {
    let mut fresh = Fresh::for_expr(e);
    go(e, &mut fresh)
}

fn go(e: &Expr, fresh: &mut Fresh) -> Expr {
    match e {
        Expr::Var(_) | Expr::Const(_) => e.clone(),
        Expr::Abstr(a) => Expr::abstr(&a.f, a.iface.clone(), &a.x, go(&a.body, fresh)),
        Expr::App(a, b) => Expr::app(go(a, fresh), go(b, fresh)),
        Expr::Pair(a, b) => Expr::pair(go(a, fresh), go(b, fresh)),
        Expr::Proj(i, a) => Expr::proj(*i, go(a, fresh)),
        Expr::Case(c) => {
            let scrutinee = go(&c.scrutinee, fresh);
            let then_e = go(&c.then_e, fresh);
            let else_e = go(&c.else_e, fresh);
            let y = fresh.name();
            Expr::let_in(
                &y,
                scrutinee,
                Expr::case(&c.x, Expr::var(&y), c.test, then_e, else_e),
            )
        }
        Expr::Let(l) => Expr::let_in(&l.x, go(&l.bound, fresh), go(&l.body, fresh)),
    }
}
