//! A small expression language over exact reals.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | name | name '(' args ')' | '(' expr ')'
//! args   := expr (';' expr)*
//! ```
//!
//! Numbers are integers or decimals; `p/q` is ordinary division of exact
//! values. Functions: `inv(e; δ)`, `exp(e)`, `fact(k)`,
//! `limit(x_n; modulus)` where the body may use `n` and the modulus may use
//! `eps`, and `sum(a_n; tail)` where both parts use `n` and `tail(N)` bounds
//! the remainder after the `N`-th partial sum.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::limits::{exp, exp_rat, limit, sum_series, ConvergentSeq};
use super::{add, ceil_u64, find_apartness, inv, mul, neg, parse_rat, real_of_rat, ten_pow_neg, RInterval, Rat, Real, RealError};

/// Largest partial sum a `sum` may ask for.
pub const MAX_INDEX: u64 = 1 << 20;
const MAX_POWER: u64 = 4096;
const MAX_FACT: u64 = 2000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(Rat),
    Var(String),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Name(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            let text = &s[start..i];
            let q = parse_rat(text).ok_or_else(|| ParseError { pos: start, msg: format!("bad number `{text}`") })?;
            out.push((start, Tok::Num(q)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(s[start..i].to_string())));
        } else if "+-*/^();".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            let ch = s[i..].chars().next().unwrap_or('?');
            return Err(ParseError { pos: i, msg: format!("unexpected character `{ch}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    depth: usize,
}

const MAX_DEPTH: usize = 200;

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn peek_sym(&self) -> Option<char> {
        match self.toks.get(self.at) {
            Some((_, Tok::Sym(c))) => Some(*c),
            _ => None,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek_sym() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn nest(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("expression nested too deeply");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.nest()?;
        let mut e = self.term()?;
        loop {
            let op = if self.eat('+') {
                Op::Add
            } else if self.eat('-') {
                Op::Sub
            } else {
                break;
            };
            e = Expr::Bin(op, Box::new(e), Box::new(self.term()?));
        }
        self.depth -= 1;
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            let op = if self.eat('*') {
                Op::Mul
            } else if self.eat('/') {
                Op::Div
            } else {
                break;
            };
            e = Expr::Bin(op, Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        self.nest()?;
        let e = if self.eat('-') { Expr::Neg(Box::new(self.unary()?)) } else { self.power()? };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Expr::Bin(Op::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.toks.get(self.at).cloned() {
            Some((_, Tok::Num(q))) => {
                self.at += 1;
                Ok(Expr::Num(q))
            }
            Some((_, Tok::Name(name))) => {
                self.at += 1;
                if !self.eat('(') {
                    return Ok(Expr::Var(name));
                }
                let mut args = vec![self.expr()?];
                while self.eat(';') {
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                check_arity(&name, args.len()).map_err(|msg| ParseError { pos: self.pos(), msg })?;
                Ok(Expr::Call(name, args))
            }
            Some((_, Tok::Sym('('))) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(_) => self.err("expected a number, name or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn check_arity(name: &str, got: usize) -> Result<(), String> {
    let want = match name {
        "exp" | "fact" => 1,
        "inv" | "limit" | "sum" => 2,
        _ => return Err(format!("unknown function `{name}`")),
    };
    if got == want {
        Ok(())
    } else {
        Err(format!("`{name}` takes {want} argument(s), got {got}"))
    }
}

pub fn parse(s: &str) -> Result<Expr, ParseError> {
    let toks = lex(s)?;
    let mut p = Parser { toks, at: 0, end: s.len(), depth: 0 };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Exact values stay exact until an operation needs a real.
#[derive(Clone)]
enum Val {
    Exact(Rat),
    Real(Real),
}

impl Val {
    fn real(self) -> Real {
        match self {
            Val::Exact(q) => real_of_rat(q),
            Val::Real(r) => r,
        }
    }
}

type Env = Vec<(String, Rat)>;

fn lookup(env: &Env, name: &str) -> Option<Rat> {
    env.iter().rev().find(|(k, _)| k == name).map(|(_, v)| v.clone())
}

fn bad(msg: impl Into<String>) -> RealError {
    RealError::Eval(msg.into())
}

fn small_int(q: &Rat, what: &str, max: u64) -> Result<i64, RealError> {
    if !q.is_integer() {
        return Err(bad(format!("{what} must be an integer, got {q}")));
    }
    match q.to_integer().to_i64() {
        Some(k) if k.unsigned_abs() <= max => Ok(k),
        _ => Err(bad(format!("{what} {q} is out of range (limit {max})"))),
    }
}

fn exact(e: &Expr, env: &Env, what: &str) -> Result<Rat, RealError> {
    match eval(e, env)? {
        Val::Exact(q) => Ok(q),
        Val::Real(_) => Err(bad(format!("{what} must be exact"))),
    }
}

/// Separation witness used when dividing by a non-constant.
fn apartness_floor() -> Rat {
    ten_pow_neg(30)
}

fn eval(e: &Expr, env: &Env) -> Result<Val, RealError> {
    Ok(match e {
        Expr::Num(q) => Val::Exact(q.clone()),
        Expr::Var(v) => Val::Exact(lookup(env, v).ok_or_else(|| bad(format!("unbound name `{v}`")))?),
        Expr::Neg(a) => match eval(a, env)? {
            Val::Exact(q) => Val::Exact(-q),
            Val::Real(r) => Val::Real(neg(&r)),
        },
        Expr::Bin(op, a, b) => binary(*op, eval(a, env)?, eval(b, env)?)?,
        Expr::Call(name, args) => call(name, args, env)?,
    })
}

fn binary(op: Op, a: Val, b: Val) -> Result<Val, RealError> {
    use Val::*;
    Ok(match (op, a, b) {
        (Op::Add, Exact(x), Exact(y)) => Exact(x + y),
        (Op::Sub, Exact(x), Exact(y)) => Exact(x - y),
        (Op::Mul, Exact(x), Exact(y)) => Exact(x * y),
        (Op::Div, Exact(x), Exact(y)) => {
            if y.is_zero() {
                return Err(bad("division by zero"));
            }
            Exact(x / y)
        }
        (Op::Div, x, Exact(y)) => {
            if y.is_zero() {
                return Err(bad("division by zero"));
            }
            Real(mul(&x.real(), &real_of_rat(y.recip())))
        }
        (Op::Div, x, Real(y)) => {
            let delta = find_apartness(&y, &apartness_floor())?;
            Real(mul(&x.real(), &inv(&y, &delta)?))
        }
        (Op::Pow, base, Exact(k)) => {
            let k = small_int(&k, "exponent", MAX_POWER)?;
            power(base, k)?
        }
        (Op::Pow, _, Real(_)) => return Err(bad("exponent must be an exact integer")),
        (Op::Add, x, y) => Real(add(&x.real(), &y.real())),
        (Op::Sub, x, y) => Real(add(&x.real(), &neg(&y.real()))),
        (Op::Mul, x, y) => Real(mul(&x.real(), &y.real())),
    })
}

fn power(base: Val, k: i64) -> Result<Val, RealError> {
    match base {
        Val::Exact(q) => {
            if k < 0 && q.is_zero() {
                return Err(bad("zero to a negative power"));
            }
            Ok(Val::Exact(q.pow(k as i32)))
        }
        Val::Real(r) => {
            let r = if k < 0 { inv(&r, &find_apartness(&r, &apartness_floor())?)? } else { r };
            let mut acc = real_of_rat(Rat::one());
            let mut sq = r;
            let mut e = k.unsigned_abs();
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul(&acc, &sq);
                }
                e >>= 1;
                if e > 0 {
                    sq = mul(&sq, &sq);
                }
            }
            Ok(Val::Real(acc))
        }
    }
}

fn factorial(k: i64) -> Rat {
    Rat::from_integer((1..=k).fold(BigInt::one(), |a, i| a * BigInt::from(i)))
}

fn call(name: &str, args: &[Expr], env: &Env) -> Result<Val, RealError> {
    match name {
        "exp" => Ok(match eval(&args[0], env)? {
            Val::Exact(q) => Val::Real(exp_rat(&q)),
            Val::Real(r) => Val::Real(exp(&r)),
        }),
        "fact" => {
            let k = small_int(&exact(&args[0], env, "fact argument")?, "fact argument", MAX_FACT)?;
            if k < 0 {
                return Err(bad("fact of a negative number"));
            }
            Ok(Val::Exact(factorial(k)))
        }
        "inv" => {
            let x = eval(&args[0], env)?.real();
            let delta = exact(&args[1], env, "apartness witness")?;
            Ok(Val::Real(inv(&x, &delta)?))
        }
        "limit" => {
            let (body, modulus) = (Arc::new(args[0].clone()), Arc::new(args[1].clone()));
            let (env_t, env_m) = (env.clone(), env.clone());
            let seq = ConvergentSeq::new(
                move |n| {
                    let mut env = env_t.clone();
                    env.push(("n".into(), Rat::from_integer(BigInt::from(n))));
                    Ok(eval(&body, &env)?.real())
                },
                move |eps| {
                    let mut env = env_m.clone();
                    env.push(("eps".into(), eps.clone()));
                    let m = exact(&modulus, &env, "limit modulus")?;
                    Ok(ceil_u64(&m).max(1))
                },
            );
            Ok(Val::Real(limit(&seq)))
        }
        "sum" => {
            let (term, tail) = (Arc::new(args[0].clone()), Arc::new(args[1].clone()));
            let (env_t, env_b) = (env.clone(), env.clone());
            // probe the bound once so that malformed tails fail early
            let at = |n: u64, env: &Env, tail: &Expr| -> Result<Rat, RealError> {
                let mut env = env.clone();
                env.push(("n".into(), Rat::from_integer(BigInt::from(n))));
                exact(tail, &env, "tail bound")
            };
            at(0, env, &tail)?;
            let tail_c = tail.clone();
            let r = sum_series(
                move |n| {
                    let mut env = env_t.clone();
                    env.push(("n".into(), Rat::from_integer(BigInt::from(n))));
                    Ok(eval(&term, &env)?.real())
                },
                move |n| {
                    let never = Rat::from_integer(BigInt::from(u64::MAX));
                    if n > MAX_INDEX {
                        return never;
                    }
                    // an ill-formed bound reads as never small enough
                    at(n, &env_b, &tail_c).map(|q| q.abs()).unwrap_or(never)
                },
            )?;
            Ok(Val::Real(r))
        }
        _ => Err(bad(format!("unknown function `{name}`"))),
    }
}

impl Expr {
    /// Evaluate a closed expression.
    pub fn to_real(&self) -> Result<Real, RealError> {
        Ok(eval(self, &Vec::new())?.real())
    }
}

/// Parse and evaluate at precision `eps`.
pub fn eval_str(s: &str, eps: &Rat) -> Result<RInterval, EvalError> {
    let e = parse(s).map_err(EvalError::Parse)?;
    e.to_real().and_then(|r| r.approx(eps)).map_err(EvalError::Real)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    Parse(ParseError),
    Real(RealError),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Parse(e) => write!(f, "parse error {e}"),
            EvalError::Real(e) => write!(f, "evaluation error: {e}"),
        }
    }
}

impl std::error::Error for EvalError {}

/// Decimal places used to print an answer at precision `eps`:
/// `⌈-log10 ε⌉ + 2`, at least 2.
pub fn output_digits(eps: &Rat) -> u32 {
    let mut d = 0u32;
    let mut p = Rat::one();
    while &p > eps && d < 4000 {
        p /= Rat::from_integer(BigInt::from(10));
        d += 1;
    }
    d + 2
}
