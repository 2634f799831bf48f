//! Recursive-descent parser for the `.lp` surface syntax.
//!
//! ```text
//! program  ::= clause*
//! clause   ::= atom [ ":-" literal ("," literal)* ] "."
//! literal  ::= [ "not" | "\+" ] atom
//! atom     ::= name [ "(" term ("," term)* ")" ]
//! term     ::= Variable | name [ "(" term ("," term)* ")" ]
//! ```
//!
//! Names start with a lowercase letter or a digit, variables with an
//! uppercase letter or `_`. `%` starts a comment running to end of line.

use crate::error::{Error, Result};

use super::{Atom, Clause, Literal, Program, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Name(String),
    Var(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Neck,
    Naf,
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Name(n) => format!("name `{n}`"),
            Token::Var(v) => format!("variable `{v}`"),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Comma => "`,`".into(),
            Token::Dot => "`.`".into(),
            Token::Neck => "`:-`".into(),
            Token::Naf => "`\\+`".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    line: usize,
    column: usize,
}

fn syntax_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let token = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
                continue;
            }
            '(' => {
                bump(&mut chars);
                Token::LParen
            }
            ')' => {
                bump(&mut chars);
                Token::RParen
            }
            ',' => {
                bump(&mut chars);
                Token::Comma
            }
            '.' => {
                bump(&mut chars);
                Token::Dot
            }
            ':' => {
                bump(&mut chars);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars);
                    Token::Neck
                } else {
                    return Err(syntax_error(start_line, start_col, "expected `:-`"));
                }
            }
            '\\' => {
                bump(&mut chars);
                if chars.peek() == Some(&'+') {
                    bump(&mut chars);
                    Token::Naf
                } else {
                    return Err(syntax_error(start_line, start_col, "expected `\\+`"));
                }
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        word.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                if c.is_uppercase() || c == '_' {
                    Token::Var(word)
                } else {
                    Token::Name(word)
                }
            }
            other => {
                return Err(syntax_error(
                    start_line,
                    start_col,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        tokens.push(Spanned {
            token,
            line: start_line,
            column: start_col,
        });
    }
    tokens.push(Spanned {
        token: Token::Eof,
        line,
        column,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Self {
            tokens: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let k = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[k].token
    }

    fn advance(&mut self) -> Spanned {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &str) -> Error {
        let tok = self.peek();
        syntax_error(
            tok.line,
            tok.column,
            format!("expected {expected}, found {}", tok.token.describe()),
        )
    }

    fn expect(&mut self, token: Token, expected: &str) -> Result<()> {
        if self.peek().token == token {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn at_eof(&self) -> bool {
        self.peek().token == Token::Eof
    }

    fn clause(&mut self) -> Result<Clause> {
        let head = self.atom()?;
        let mut body = Vec::new();
        if self.peek().token == Token::Neck {
            self.advance();
            loop {
                body.push(self.literal()?);
                match self.peek().token {
                    Token::Comma => {
                        self.advance();
                    }
                    Token::Dot => break,
                    _ => return Err(self.unexpected("`,` or `.`")),
                }
            }
        }
        self.expect(Token::Dot, "`.`")?;
        Ok(Clause::new(head, body))
    }

    fn literal(&mut self) -> Result<Literal> {
        let negated = match (&self.peek().token, self.peek_at(1)) {
            (Token::Naf, _) => {
                self.advance();
                true
            }
            (Token::Name(n), Token::Name(_)) if n == "not" => {
                self.advance();
                true
            }
            _ => false,
        };
        Ok(Literal {
            atom: self.atom()?,
            negated,
        })
    }

    fn atom(&mut self) -> Result<Atom> {
        match self.peek().token.clone() {
            Token::Name(name) => {
                self.advance();
                let args = if self.peek().token == Token::LParen {
                    self.arguments()?
                } else {
                    Vec::new()
                };
                Ok(Atom::new(name, args))
            }
            _ => Err(self.unexpected("an atom")),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>> {
        self.expect(Token::LParen, "`(`")?;
        let mut args = vec![self.term()?];
        loop {
            match self.peek().token {
                Token::Comma => {
                    self.advance();
                    args.push(self.term()?);
                }
                Token::RParen => {
                    self.advance();
                    return Ok(args);
                }
                _ => return Err(self.unexpected("`,` or `)`")),
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek().token.clone() {
            Token::Var(v) => {
                self.advance();
                Ok(Term::Var(v))
            }
            Token::Name(name) => {
                self.advance();
                if self.peek().token == Token::LParen {
                    Ok(Term::Compound(name, self.arguments()?))
                } else {
                    Ok(Term::Const(name))
                }
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

/// Parses a whole program; one [`Clause`] per source rule.
pub fn parse_program(text: &str) -> Result<Program> {
    let mut parser = Parser::new(text)?;
    let mut clauses = Vec::new();
    while !parser.at_eof() {
        clauses.push(parser.clause()?);
    }
    Program::new(clauses)
}

/// Parses a single atom such as `win(a)` (no trailing dot).
pub fn parse_atom(text: &str) -> Result<Atom> {
    let mut parser = Parser::new(text)?;
    let atom = parser.atom()?;
    if !parser.at_eof() {
        return Err(parser.unexpected("end of input"));
    }
    Ok(atom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rule_with_negation() {
        let p = parse_program("p :- q, not r.").unwrap();
        let c = &p.clauses()[0];
        assert_eq!(c.head, Atom::prop("p"));
        assert_eq!(c.pos_body().collect::<Vec<_>>(), vec![&Atom::prop("q")]);
        assert_eq!(c.neg_body().collect::<Vec<_>>(), vec![&Atom::prop("r")]);
    }

    #[test]
    fn fact_has_empty_body() {
        let p = parse_program("q.").unwrap();
        assert_eq!(p.clauses(), &[Clause::fact(Atom::prop("q"))]);
    }

    #[test]
    fn unclosed_argument_list() {
        let err = parse_program("p :- q(X,Y.").unwrap_err();
        match err {
            Error::Syntax { line, column, .. } => assert_eq!((line, column), (1, 11)),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn prolog_negation_and_comments() {
        let text = "% header\np :- \\+ q. % trailing\nq :- not r, s(X).\n";
        let p = parse_program(text).unwrap();
        assert_eq!(p.clauses().len(), 2);
        assert!(p.clauses()[0].body[0].negated);
        assert!(p.clauses()[1].body[0].negated);
        assert!(!p.clauses()[1].body[1].negated);
    }

    #[test]
    fn not_alone_is_a_predicate() {
        let p = parse_program("not. p :- not.").unwrap();
        assert_eq!(p.clauses()[1].body, vec![Literal::pos(Atom::prop("not"))]);
    }

    #[test]
    fn error_position_on_later_line() {
        let err = parse_program("a.\nb :- c,\n  .").unwrap_err();
        assert!(matches!(
            err,
            Error::Syntax {
                line: 3,
                column: 3,
                ..
            }
        ));
    }

    #[test]
    fn empty_argument_list_rejected() {
        assert!(parse_program("p().").is_err());
        assert!(parse_program("X :- p.").is_err());
        assert!(parse_program("p :- q").is_err());
    }

    #[test]
    fn parse_single_atom() {
        assert_eq!(
            parse_atom("move(a, s(b))").unwrap(),
            Atom::new(
                "move",
                vec![
                    Term::Const("a".into()),
                    Term::Compound("s".into(), vec![Term::Const("b".into())])
                ]
            )
        );
        assert!(parse_atom("p.").is_err());
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            "[a-e][a-z0-9]{0,2}".prop_map(Term::Const),
            "[A-E][a-z0-9]{0,2}".prop_map(Term::Var),
            "[0-9]{1,2}".prop_map(Term::Const),
        ];
        leaf.prop_recursive(3, 12, 3, |inner| {
            ("[f-h]", prop::collection::vec(inner, 1..3))
                .prop_map(|(f, args)| Term::Compound(f, args))
        })
    }

    fn arb_atom() -> impl Strategy<Value = Atom> {
        // arity fixed by predicate name so generated programs stay consistent
        prop_oneof![Just(0usize), Just(1usize), Just(2usize)].prop_flat_map(|arity| {
            prop::collection::vec(arb_term(), arity)
                .prop_map(move |args| Atom::new(format!("p{arity}"), args))
        })
    }

    fn arb_clause() -> impl Strategy<Value = Clause> {
        (
            arb_atom(),
            prop::collection::vec((arb_atom(), any::<bool>()), 0..4),
        )
            .prop_map(|(head, body)| {
                Clause::new(
                    head,
                    body.into_iter()
                        .map(|(atom, negated)| Literal { atom, negated })
                        .collect(),
                )
            })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(clauses in prop::collection::vec(arb_clause(), 0..6)) {
            let program = Program::new(clauses).unwrap();
            let printed = program.to_string();
            let reparsed = parse_program(&printed).unwrap();
            prop_assert_eq!(&reparsed, &program);
            // whitespace is irrelevant
            let squeezed = printed.replace(", ", ",").replace(" :- ", ":-");
            prop_assert_eq!(parse_program(&squeezed).unwrap(), program);
        }
    }
}
