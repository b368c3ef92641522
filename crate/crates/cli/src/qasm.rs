use diagsynth::{Angle, Circuit, Error, Gate};

/// OpenQASM 3 listing of `cx` and `p(θ)` instructions. Angles print in their
/// shortest round-trip decimal form.
pub fn to_qasm(c: &Circuit) -> Result<String, Error> {
    let mut out = format!("OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[{}] q;\n", c.n());
    for g in c.gates() {
        match *g {
            Gate::Cx { control, target } => out.push_str(&format!("cx q[{control}], q[{target}];\n")),
            Gate::Phase { wire, angle: Angle::Value(x) } => out.push_str(&format!("p({x:?}) q[{wire}];\n")),
            Gate::Phase { angle: Angle::Sym(_), .. } => return Err(Error::SymbolicAngle),
        }
    }
    Ok(out)
}
