//! Parser for `.lzs` (source) and `.lzi` (internal) programs.
//!
//! ```text
//! e ::= fun f (x : T) = e | case x = e in τ ? e : e | let x = e in e
//!     | app
//! app ::= (fst | snd) atom | atom | app atom
//! atom ::= x | n | true | false | ( e ) | ( e , e )
//! ```

use super::Expr;
use crate::error::{ParseError, SyntaxError};
use crate::lexer::{tokenize, Cursor, Tok};
use crate::types::{build_interface, build_type, syntax, BuildMode, Constant, TypeStore};

const KEYWORDS: [&str; 8] = ["fun", "case", "let", "in", "fst", "snd", "true", "false"];

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept typecases on types equivalent to `Empty` or `Any`.
    pub allow_trivial_case: bool,
}

struct Parser<'s> {
    store: &'s TypeStore,
    cur: Cursor,
    internal: bool,
    opts: ParseOptions,
}

/// Parses a source-language program.
pub fn parse_source(store: &TypeStore, src: &str, opts: ParseOptions) -> Result<Expr, ParseError> {
    parse(store, src, false, opts)
}

/// Parses an internal-language program: `let` is allowed, reserved `%`
/// names may appear, and typecase scrutinees must be check forms.
pub fn parse_internal(
    store: &TypeStore,
    src: &str,
    opts: ParseOptions,
) -> Result<Expr, ParseError> {
    parse(store, src, true, opts)
}

fn parse(
    store: &TypeStore,
    src: &str,
    internal: bool,
    opts: ParseOptions,
) -> Result<Expr, ParseError> {
    let cur = Cursor::new(tokenize(src, internal)?);
    let mut p = Parser {
        store,
        cur,
        internal,
        opts,
    };
    let e = p.expr()?;
    if !p.cur.at_eof() {
        return Err(p.cur.error(format!("unexpected {}", p.cur.peek())).into());
    }
    Ok(e)
}

impl Parser<'_> {
    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.cur.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.cur.advance();
                Ok(s)
            }
            t => Err(self.cur.error(format!("expected a variable, found {t}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if self.cur.is_keyword("fun") {
            self.cur.advance();
            let f = self.ident()?;
            self.cur.expect(Tok::LParen)?;
            let x = self.ident()?;
            self.cur.expect(Tok::Colon)?;
            let ty = syntax::parse_type(&mut self.cur)?;
            self.cur.expect(Tok::RParen)?;
            self.cur.expect(Tok::Equals)?;
            let iface = build_interface(self.store, &ty)?;
            let body = self.expr()?;
            return Ok(Expr::abstr(f, iface, x, body));
        }
        if self.cur.is_keyword("case") {
            self.cur.advance();
            let x = self.ident()?;
            self.cur.expect(Tok::Equals)?;
            let scrutinee = self.expr()?;
            if self.internal && !scrutinee.is_check_form() {
                let (line, col) = (self.cur.here().line, self.cur.here().col);
                return Err(SyntaxError::new(
                    line,
                    col,
                    "typecase scrutinee must be a variable, constant, function or pair of these",
                )
                .into());
            }
            self.cur.expect_keyword("in")?;
            let (line, col) = (self.cur.here().line, self.cur.here().col);
            let te = syntax::parse_type(&mut self.cur)?;
            let test = build_type(self.store, &te, BuildMode::Test)?;
            if !self.opts.allow_trivial_case {
                if self.store.is_empty(test) {
                    return Err(ParseError::TrivialTest {
                        line,
                        col,
                        which: "Empty",
                    });
                }
                if self.store.subtype(self.store.any(), test) {
                    return Err(ParseError::TrivialTest {
                        line,
                        col,
                        which: "Any",
                    });
                }
            }
            self.cur.expect(Tok::Question)?;
            let then_e = self.expr()?;
            self.cur.expect(Tok::Colon)?;
            let else_e = self.expr()?;
            return Ok(Expr::case(x, scrutinee, test, then_e, else_e));
        }
        if self.cur.is_keyword("let") {
            if !self.internal {
                return Err(self
                    .cur
                    .error("`let` is only available in internal programs")
                    .into());
            }
            self.cur.advance();
            let x = self.ident()?;
            self.cur.expect(Tok::Equals)?;
            let bound = self.expr()?;
            self.cur.expect_keyword("in")?;
            let body = self.expr()?;
            return Ok(Expr::let_in(x, bound, body));
        }
        self.app()
    }

    fn app(&mut self) -> Result<Expr, ParseError> {
        let mut e = if self.cur.is_keyword("fst") || self.cur.is_keyword("snd") {
            let i = if self.cur.is_keyword("fst") { 1 } else { 2 };
            self.cur.advance();
            Expr::proj(i, self.atom()?)
        } else {
            self.atom()?
        };
        while self.starts_atom() {
            let a = self.atom()?;
            e = Expr::app(e, a);
        }
        Ok(e)
    }

    fn starts_atom(&self) -> bool {
        match self.cur.peek() {
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()) || s == "true" || s == "false",
            Tok::Int(_) | Tok::LParen => true,
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.cur.peek().clone() {
            Tok::Int(n) => {
                self.cur.advance();
                Ok(Expr::Const(Constant::Int(n)))
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.cur.advance();
                Ok(Expr::boolean(s == "true"))
            }
            Tok::Ident(_) => Ok(Expr::Var(self.ident()?)),
            Tok::LParen => {
                self.cur.advance();
                let a = self.expr()?;
                if *self.cur.peek() == Tok::Comma {
                    self.cur.advance();
                    let b = self.expr()?;
                    self.cur.expect(Tok::RParen)?;
                    return Ok(Expr::pair(a, b));
                }
                self.cur.expect(Tok::RParen)?;
                Ok(a)
            }
            t => Err(self
                .cur
                .error(format!("expected an expression, found {t}"))
                .into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{compile, print_expr};
    use crate::types::TypeStore;

    const NEG: &str = "fun f (x : (tt -> ff) & (ff -> tt)) = case y = x in tt ? false : true";

    #[test]
    fn negation_function() {
        let s = TypeStore::new();
        let e = parse_source(&s, NEG, ParseOptions::default()).unwrap();
        let Expr::Abstr(a) = &e else { panic!("{e:?}") };
        assert_eq!(a.iface.arrows.len(), 2);
        assert_eq!(print_expr(&s, &e), NEG);
    }

    #[test]
    fn trivial_tests_are_rejected_by_default() {
        let s = TypeStore::new();
        let src = "case x = 3 in Any ? 1 : 2";
        let err = parse_source(&s, src, ParseOptions::default()).unwrap_err();
        assert!(
            matches!(
                err,
                ParseError::TrivialTest {
                    which: "Any",
                    line: 1,
                    col: 15
                }
            ),
            "{err:?}"
        );
        let err = parse_source(
            &s,
            "case x = 3 in Int & Bool ? 1 : 2",
            ParseOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ParseError::TrivialTest { which: "Empty", .. }
        ));
        assert!(parse_source(
            &s,
            src,
            ParseOptions {
                allow_trivial_case: true
            }
        )
        .is_ok());
    }

    #[test]
    fn let_only_in_internal_programs() {
        let s = TypeStore::new();
        assert!(parse_source(&s, "let x = 1 in x", ParseOptions::default()).is_err());
        assert!(parse_internal(&s, "let %0 = 1 in %0", ParseOptions::default()).is_ok());
        let err =
            parse_internal(&s, "case x = f 1 in Int ? 1 : 2", ParseOptions::default()).unwrap_err();
        assert_eq!(err.position().0, 1);
    }

    #[test]
    fn application_and_projection_precedence() {
        let s = TypeStore::new();
        let e = parse_source(&s, "fst p q r", ParseOptions::default()).unwrap();
        let expect = Expr::app(
            Expr::app(Expr::proj(1, Expr::var("p")), Expr::var("q")),
            Expr::var("r"),
        );
        assert_eq!(e, expect);
        assert_eq!(print_expr(&s, &e), "fst p q r");
        let e = parse_source(&s, "f (snd (1, -2)) (g x)", ParseOptions::default()).unwrap();
        assert_eq!(print_expr(&s, &e), "f (snd (1, -2)) (g x)");
    }

    #[test]
    fn compile_binds_the_scrutinee() {
        let s = TypeStore::new();
        let e = parse_source(&s, "case x = f 3 in Int ? x : 0", ParseOptions::default()).unwrap();
        let c = compile(&e);
        assert_eq!(
            print_expr(&s, &c),
            "let %0 = f 3 in case x = %0 in Int ? x : 0"
        );
        assert!(c.is_internal_form());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let s = TypeStore::new();
        let err = parse_source(
            &s,
            "fun f (x : Int -> Int) =\n  (x,",
            ParseOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err.position(), (2, 6));
        let err =
            parse_source(&s, "fun f (x : Bot -> Int) = x", ParseOptions::default()).unwrap_err();
        assert!(matches!(err, ParseError::Interface { .. }));
    }
}
