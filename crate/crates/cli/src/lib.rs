//! Commands behind the `nacas` binary.

pub mod audit;
pub mod input;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use nacas::exactnum::{Field, PrimeField};
use nacas::groebner::{
    buchberger, certify_inconsistency, read_certificate, verify_certificate, write_certificate, AnyCertificate,
    CoeffPoly, GbOptions, GroebnerError, GroebnerField, MonomialOrder, PolyRing,
};
use nacas::lambdamu::{generate_system, to_native_text, ActionVariant};
use nacas::singio::{self, SingDocument};

use input::{parse_order, System};

/// A mathematical outcome the caller asked to rule out: an invalid
/// certificate, or a consistent system where 1 was expected. Exit code 1.
#[derive(Debug)]
pub struct MathFailure(pub String);

impl fmt::Display for MathFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for MathFailure {}

/// Environment variable naming the fixture directory.
pub const FIXTURE_ENV: &str = "NACAS_FIXTURES";

pub fn fixture_dir() -> PathBuf {
    match std::env::var_os(FIXTURE_ENV) {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures")),
    }
}

/// Writes to `out`, or to stdout when absent.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenFormat {
    Native,
    Singular,
}

/// The generated system as text, and its length.
pub fn gen_text(variant: ActionVariant, format: GenFormat) -> Result<(String, usize)> {
    let (e, polys) = generate_system(variant)?;
    let text = match format {
        GenFormat::Native => to_native_text(&e.ring, &polys),
        GenFormat::Singular => {
            let order = MonomialOrder::degrevlex(e.ring.nvars());
            singio::print(&SingDocument::from_system(&e.ring, &order, 0, "f", "i", &polys)?)
        }
    };
    Ok((text, polys.len()))
}

/// Options shared by `gb` and `certify`.
#[derive(Debug, Clone)]
pub struct SystemArgs {
    pub input: PathBuf,
    /// Overrides the declared characteristic.
    pub characteristic: Option<u64>,
    /// Overrides the declared order.
    pub order: Option<String>,
    pub threads: usize,
}

impl SystemArgs {
    fn load(&self) -> Result<(System, MonomialOrder, u64)> {
        let sys = System::load(&self.input)?;
        let order = match &self.order {
            Some(spec) => parse_order(spec, &sys)?,
            None => sys.order.clone(),
        };
        let ch = self.characteristic.unwrap_or(sys.characteristic);
        Ok((sys, order, ch))
    }

    fn opts(&self) -> GbOptions {
        GbOptions {
            threads: self.threads.max(1),
        }
    }
}

fn order_line(ring_vars: &[String], order: &MonomialOrder) -> String {
    let prec: Vec<&str> = order.precedence().iter().map(|&v| ring_vars[v].as_str()).collect();
    format!("{} {}", order.kind().singular_name(), prec.join(" "))
}

fn basis_text<F: GroebnerField>(
    ring: &PolyRing<F>,
    polys: &[CoeffPoly<F>],
    order: &MonomialOrder,
    lift: bool,
    opts: GbOptions,
) -> Result<String> {
    let gb = buchberger(ring, polys, order, lift, opts)?;
    let mut s = format!("characteristic {}\n", ring.coeffs().characteristic());
    s.push_str(&format!("variables {}\n", ring.vars().join(" ")));
    s.push_str(&format!("order {}\n", order_line(ring.vars(), order)));
    s.push_str(&format!("basis {}\n", gb.basis.len()));
    for g in &gb.basis {
        s.push_str(&ring.format(g, order));
        s.push('\n');
    }
    if let Some(rows) = &gb.lift {
        s.push_str(&format!("lift {} {}\n", rows.len(), polys.len()));
        for row in rows {
            for c in row {
                s.push_str(&ring.format(c, order));
                s.push('\n');
            }
        }
    }
    Ok(s)
}

/// Reduced basis (and lift matrix) as text.
pub fn gb(args: &SystemArgs, lift: bool) -> Result<String> {
    let (sys, order, ch) = args.load()?;
    if ch == 0 {
        basis_text(&sys.ring, &sys.polys, &order, lift, args.opts())
    } else {
        let (ring, polys) = sys.mod_p(&PrimeField::new(ch)?)?;
        basis_text(&ring, &polys, &order, lift, args.opts())
    }
}

fn certify_in<F: GroebnerField>(
    ring: &PolyRing<F>,
    polys: &[CoeffPoly<F>],
    order: &MonomialOrder,
    opts: GbOptions,
) -> Result<String> {
    let cert = match certify_inconsistency(ring, polys, order, opts) {
        Ok(c) => c,
        Err(GroebnerError::ConsistentSystem) => {
            return Err(MathFailure("the system is consistent: 1 is not in the ideal".into()).into())
        }
        Err(e) => return Err(e.into()),
    };
    if !verify_certificate(&cert).is_valid() {
        bail!("internal error: produced certificate does not verify");
    }
    Ok(write_certificate(&cert))
}

/// Certificate file text for an inconsistent system.
pub fn certify(args: &SystemArgs) -> Result<String> {
    let (sys, order, ch) = args.load()?;
    if ch == 0 {
        certify_in(&sys.ring, &sys.polys, &order, args.opts())
    } else {
        let (ring, polys) = sys.mod_p(&PrimeField::new(ch)?)?;
        certify_in(&ring, &polys, &order, args.opts())
    }
}

fn same_generators<F: Field>(cert: &nacas::groebner::Certificate<F>, ring: &PolyRing<F>, polys: &[CoeffPoly<F>]) -> bool {
    cert.ring.vars() == ring.vars() && cert.generators == polys
}

/// Checks a certificate file; with `input`, also that it certifies that
/// system. Ok with a one-line verdict when valid.
pub fn verify(cert_path: &Path, input: Option<&Path>) -> Result<String> {
    let text = std::fs::read_to_string(cert_path).with_context(|| format!("reading {}", cert_path.display()))?;
    let cert = read_certificate(&text).with_context(|| format!("parsing {}", cert_path.display()))?;
    if let Some(path) = input {
        let sys = System::load(path)?;
        let matches = match &cert {
            AnyCertificate::Rational(c) => same_generators(c, &sys.ring, &sys.polys),
            AnyCertificate::Modular(c) => {
                let (ring, polys) = sys.mod_p(c.ring.coeffs())?;
                same_generators(c, &ring, &polys)
            }
        };
        if !matches {
            return Err(MathFailure(format!(
                "certificate generators differ from the system in {}",
                path.display()
            ))
            .into());
        }
    }
    match cert.verify() {
        None => Ok(format!(
            "valid: {} generators, characteristic {}\n",
            cert.len(),
            cert.characteristic()
        )),
        Some(residual) => Err(MathFailure(format!("invalid: residual {residual}")).into()),
    }
}

/// Shortcut for library users: the reference 224-polynomial system shipped with the fixtures.
pub fn figure1_system() -> Result<System> {
    System::load(&fixture_dir().join("figure1.sing"))
}
