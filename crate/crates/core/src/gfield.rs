//! Scalar types: F_2, F_p, the complexified field F_{p^2} = F_p(i) for
//! p = 3 (mod 4), and unreduced integers.
//!
//! Residues are stored canonically in `0..p`. Centered lifts into
//! `[-(p-1)/2, (p-1)/2]` are produced on demand by [`center_lift`].

use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::{mul_mod, reduce_signed, Prime};

/// Common interface of every coefficient type a state vector can hold.
pub trait Scalar:
    Copy
    + Eq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Copy + Eq + Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn from_int(ctx: Self::Ctx, v: i128) -> Self;
    /// Complex conjugation; the identity on real scalars.
    fn conj(self) -> Self;
    fn is_zero(&self) -> bool;
    fn render(&self, centered: bool) -> String;
}

/// Scalars with multiplicative inverses.
pub trait FieldScalar: Scalar {
    fn inv(self) -> Option<Self>;
}

/// A validated prime characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FieldCtx {
    p: Prime,
    complexifiable: bool,
}

/// Validates `p` and records whether x^2 + 1 is irreducible over F_p.
pub fn make_field(p: u64) -> Result<FieldCtx> {
    let p = Prime::new(p)?;
    Ok(FieldCtx {
        p,
        complexifiable: p.get() % 4 == 3,
    })
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self> {
        make_field(p)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p.get()
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_complexifiable(&self) -> bool {
        self.complexifiable
    }

    /// Builds `re + im*i`, reducing signed inputs mod p.
    pub fn elem(&self, re: i64, im: i64) -> Result<GaussianElem> {
        if !self.complexifiable {
            return Err(Error::InvalidArgument(format!(
                "F_{p} has a square root of -1; F_{{{p}^2}} is not available",
                p = self.p()
            )));
        }
        Ok(GaussianElem {
            re: reduce_signed(re, self.p()),
            im: reduce_signed(im, self.p()),
            ctx: *self,
        })
    }

    pub fn real(&self, v: i64) -> Result<GaussianElem> {
        self.elem(v, 0)
    }

    /// Element of the prime field F_p.
    pub fn fp(&self, v: i64) -> Fp {
        Fp {
            v: reduce_signed(v, self.p()),
            ctx: *self,
        }
    }

    /// Parses `"a"`, `"bi"`, `"a+bi"` or `"a-bi"` with signed decimal parts.
    pub fn parse_elem(&self, s: &str) -> Result<GaussianElem> {
        let bad = || Error::InvalidArgument(format!("cannot parse field element {s:?}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix('i') else {
            return self.real(t.parse().map_err(|_| bad())?);
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1,
            "-" => -1,
            x => x.parse().map_err(|_| bad())?,
        };
        self.elem(re.parse().map_err(|_| bad())?, im)
    }
}

/// Maps a residue to its representative in `[-(p-1)/2, (p-1)/2]`.
#[inline]
pub fn center(r: u64, p: u64) -> i64 {
    if r <= (p - 1) / 2 {
        r as i64
    } else {
        r as i64 - p as i64
    }
}

/// An element `re + im*i` of F_{p^2}.
///
/// Arithmetic operators panic when the operands come from different fields;
/// [`gf_arith`] is the checked alternative.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussianElem {
    re: u64,
    im: u64,
    ctx: FieldCtx,
}

impl GaussianElem {
    pub fn re(&self) -> u64 {
        self.re
    }

    pub fn im(&self) -> u64 {
        self.im
    }

    pub fn field(&self) -> FieldCtx {
        self.ctx
    }

    pub fn pow(self, mut e: u128) -> Self {
        let mut base = self;
        let mut acc = Self::one(self.ctx);
        while e != 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `x^p`, the Frobenius automorphism; agrees with [`conj`].
    pub fn frobenius(self) -> Self {
        self.pow(self.ctx.p() as u128)
    }
}

impl Debug for GaussianElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.render(false), self.ctx.p())
    }
}

impl fmt::Display for GaussianElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

#[inline]
fn same_ctx(a: FieldCtx, b: FieldCtx) {
    assert_eq!(a, b, "mixed field contexts");
}

impl Add for GaussianElem {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        same_ctx(self.ctx, o.ctx);
        let p = self.ctx.p();
        GaussianElem {
            re: ((self.re as u128 + o.re as u128) % p as u128) as u64,
            im: ((self.im as u128 + o.im as u128) % p as u128) as u64,
            ctx: self.ctx,
        }
    }
}

impl Neg for GaussianElem {
    type Output = Self;
    fn neg(self) -> Self {
        let p = self.ctx.p();
        GaussianElem {
            re: (p - self.re) % p,
            im: (p - self.im) % p,
            ctx: self.ctx,
        }
    }
}

impl Sub for GaussianElem {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for GaussianElem {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        same_ctx(self.ctx, o.ctx);
        let p = self.ctx.p();
        let ac = mul_mod(self.re, o.re, p);
        let bd = mul_mod(self.im, o.im, p);
        let ad = mul_mod(self.re, o.im, p);
        let bc = mul_mod(self.im, o.re, p);
        GaussianElem {
            re: (ac + p - bd) % p,
            im: ((ad as u128 + bc as u128) % p as u128) as u64,
            ctx: self.ctx,
        }
    }
}

impl Scalar for GaussianElem {
    type Ctx = FieldCtx;

    fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    fn zero(ctx: FieldCtx) -> Self {
        GaussianElem { re: 0, im: 0, ctx }
    }

    fn one(ctx: FieldCtx) -> Self {
        GaussianElem { re: 1, im: 0, ctx }
    }

    fn from_int(ctx: FieldCtx, v: i128) -> Self {
        GaussianElem {
            re: v.rem_euclid(ctx.p() as i128) as u64,
            im: 0,
            ctx,
        }
    }

    fn conj(self) -> Self {
        let p = self.ctx.p();
        GaussianElem {
            im: (p - self.im) % p,
            ..self
        }
    }

    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn render(&self, centered: bool) -> String {
        if centered {
            let (a, b) = center_lift(*self);
            let sign = if b < 0 { '-' } else { '+' };
            format!("{a}{sign}{}i", b.unsigned_abs())
        } else {
            format!("{}+{}i", self.re, self.im)
        }
    }
}

impl FieldScalar for GaussianElem {
    fn inv(self) -> Option<Self> {
        gf_inv(self).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    /// Negates `x`; `y` only participates in the context check.
    Neg,
}

/// Checked binary arithmetic in F_{p^2}.
pub fn gf_arith(op: ArithOp, x: GaussianElem, y: GaussianElem) -> Result<GaussianElem> {
    if x.ctx != y.ctx {
        return Err(Error::ContextMismatch);
    }
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Neg => -x,
    })
}

/// `a - b*i`. Only constructible on complexifiable fields, so this cannot fail.
pub fn conj(x: GaussianElem) -> GaussianElem {
    x.conj()
}

/// `a^2 + b^2 mod p`, i.e. `conj(x) * x`.
pub fn norm_sq(x: GaussianElem) -> u64 {
    let p = x.ctx.p();
    ((mul_mod(x.re, x.re, p) as u128 + mul_mod(x.im, x.im, p) as u128) % p as u128) as u64
}

/// `conj(x) * norm_sq(x)^(p-2)`.
pub fn gf_inv(x: GaussianElem) -> Result<GaussianElem> {
    if x.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let p = x.ctx.p();
    // the norm of a non-zero element is non-zero because -1 is a non-residue
    let n_inv = crate::numtheory::pow_mod(norm_sq(x), p - 2, p);
    Ok(x.conj() * GaussianElem::from_int(x.ctx, n_inv as i128))
}

/// Centered integer lifts of both components.
pub fn center_lift(x: GaussianElem) -> (i64, i64) {
    let p = x.ctx.p();
    (center(x.re, p), center(x.im, p))
}

/// Element of the prime field F_p (any prime, including 2).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    ctx: FieldCtx,
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn centered(&self) -> i64 {
        center(self.v, self.ctx.p())
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.v, self.ctx.p())
    }
}

impl Add for Fp {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        same_ctx(self.ctx, o.ctx);
        let p = self.ctx.p() as u128;
        Fp {
            v: ((self.v as u128 + o.v as u128) % p) as u64,
            ctx: self.ctx,
        }
    }
}

impl Neg for Fp {
    type Output = Self;
    fn neg(self) -> Self {
        let p = self.ctx.p();
        Fp {
            v: (p - self.v) % p,
            ctx: self.ctx,
        }
    }
}

impl Sub for Fp {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for Fp {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        same_ctx(self.ctx, o.ctx);
        Fp {
            v: mul_mod(self.v, o.v, self.ctx.p()),
            ctx: self.ctx,
        }
    }
}

impl Scalar for Fp {
    type Ctx = FieldCtx;

    fn ctx(&self) -> FieldCtx {
        self.ctx
    }
    fn zero(ctx: FieldCtx) -> Self {
        Fp { v: 0, ctx }
    }
    fn one(ctx: FieldCtx) -> Self {
        Fp {
            v: 1 % ctx.p(),
            ctx,
        }
    }
    fn from_int(ctx: FieldCtx, v: i128) -> Self {
        Fp {
            v: v.rem_euclid(ctx.p() as i128) as u64,
            ctx,
        }
    }
    fn conj(self) -> Self {
        self
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn render(&self, centered: bool) -> String {
        if centered {
            self.centered().to_string()
        } else {
            self.v.to_string()
        }
    }
}

impl FieldScalar for Fp {
    fn inv(self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            let p = self.ctx.p();
            Some(Fp {
                v: crate::numtheory::pow_mod(self.v, p - 2, p),
                ctx: self.ctx,
            })
        }
    }
}

/// F_2, the scalar field of the modal theory.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf2(pub bool);

impl Gf2 {
    pub const ZERO: Gf2 = Gf2(false);
    pub const ONE: Gf2 = Gf2(true);
}

impl Debug for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 as u8)
    }
}

impl Add for Gf2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, o: Self) -> Self {
        Gf2(self.0 ^ o.0)
    }
}

impl Sub for Gf2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, o: Self) -> Self {
        Gf2(self.0 ^ o.0)
    }
}

impl Mul for Gf2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: Self) -> Self {
        Gf2(self.0 & o.0)
    }
}

impl Neg for Gf2 {
    type Output = Self;
    fn neg(self) -> Self {
        self
    }
}

impl Scalar for Gf2 {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: ()) -> Self {
        Gf2::ZERO
    }
    fn one(_: ()) -> Self {
        Gf2::ONE
    }
    fn from_int(_: (), v: i128) -> Self {
        Gf2(v.rem_euclid(2) == 1)
    }
    fn conj(self) -> Self {
        self
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn render(&self, _centered: bool) -> String {
        (self.0 as u8).to_string()
    }
}

impl FieldScalar for Gf2 {
    fn inv(self) -> Option<Self> {
        self.0.then_some(self)
    }
}

/// Unreduced integer amplitudes, for tracking values before they are
/// mapped into a field. Overflow panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Int(pub i128);

impl Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Int {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Int(self
            .0
            .checked_add(o.0)
            .expect("integer overflow in addition"))
    }
}

impl Sub for Int {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Int(self
            .0
            .checked_sub(o.0)
            .expect("integer overflow in subtraction"))
    }
}

impl Mul for Int {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Int(self
            .0
            .checked_mul(o.0)
            .expect("integer overflow in multiplication"))
    }
}

impl Neg for Int {
    type Output = Self;
    fn neg(self) -> Self {
        Int(self.0.checked_neg().expect("integer overflow in negation"))
    }
}

impl Scalar for Int {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: ()) -> Self {
        Int(0)
    }
    fn one(_: ()) -> Self {
        Int(1)
    }
    fn from_int(_: (), v: i128) -> Self {
        Int(v)
    }
    fn conj(self) -> Self {
        self
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn render(&self, _centered: bool) -> String {
        self.0.to_string()
    }
}
