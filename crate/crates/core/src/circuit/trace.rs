use std::fmt;
use std::str::FromStr;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::f2::{parity, Basis, SigVec};

/// Full table of wire signatures `v_k(t)` for `t = 0..=#CX`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignatureTrace {
    n: usize,
    // time-major, `(len + 1) * n` entries
    table: Vec<u32>,
}

impl SignatureTrace {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of CX steps.
    pub fn len(&self) -> usize {
        self.table.len() / self.n - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `v_k(t)`.
    pub fn get(&self, k: usize, t: usize) -> SigVec {
        SigVec::from_raw(self.table[t * self.n + k], self.n)
    }

    pub(crate) fn raw_at(&self, t: usize) -> &[u32] {
        &self.table[t * self.n..(t + 1) * self.n]
    }

    /// Signatures of all wires at time `t`.
    pub fn at(&self, t: usize) -> Vec<SigVec> {
        self.raw_at(t).iter().map(|&b| SigVec::from_raw(b, self.n)).collect()
    }

    pub fn basis_at(&self, t: usize) -> Basis {
        Basis::from_raw_unchecked(self.raw_at(t))
    }

    pub fn final_basis(&self) -> Basis {
        self.basis_at(self.len())
    }
}

/// Runs the signature recurrence: `v_k(0) = e_k`, and the CX at step `t`
/// XORs the control's signature into the target's.
pub fn simulate_signatures(c: &Circuit) -> SignatureTrace {
    let n = c.n();
    let mut cur: Vec<u32> = (0..n).map(|k| 1u32 << k).collect();
    let mut table = Vec::with_capacity((c.cx_count() + 1) * n);
    table.extend_from_slice(&cur);
    for g in c.gates() {
        if let Gate::Cx { control, target } = *g {
            cur[target] ^= cur[control];
            table.extend_from_slice(&cur);
        }
    }
    SignatureTrace { n, table }
}

/// Distinct signatures over all wires and times, sorted.
pub fn visited_signatures(tr: &SignatureTrace) -> Vec<SigVec> {
    let mut seen = vec![false; 1 << tr.n];
    for &b in &tr.table {
        seen[b as usize] = true;
    }
    collect_flags(&seen, tr.n, true)
}

fn collect_flags(flags: &[bool], n: usize, want: bool) -> Vec<SigVec> {
    flags.iter().enumerate().skip(1).filter(|&(_, &f)| f == want).map(|(b, _)| SigVec::from_raw(b as u32, n)).collect()
}

/// Final wire signatures `v_k(len)`, without building the full trace.
pub fn final_signatures(c: &Circuit) -> Basis {
    let mut cur: Vec<u32> = (0..c.n()).map(|k| 1u32 << k).collect();
    for (control, target) in c.cx_pairs() {
        cur[target] ^= cur[control];
    }
    Basis::from_raw_unchecked(&cur)
}

/// Image of basis state `b` under the circuit's CX network: bit `k` of the
/// result is ⟨v_k(len), b⟩.
pub fn final_permutation(c: &Circuit, b: SigVec) -> Result<SigVec> {
    if b.dim() != c.n() {
        return Err(Error::Dimension { expected: c.n(), actual: b.dim() });
    }
    let fin = final_signatures(c);
    let bits =
        fin.vectors().iter().enumerate().fold(0u32, |acc, (k, v)| acc | (u32::from(parity(v.bits() & b.bits())) << k));
    Ok(SigVec::from_raw(bits, c.n()))
}

/// Correctness variant of a diagonal-operator circuit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Variant {
    /// Final signatures equal the initial ones.
    Npa,
    /// Final signatures are the standard basis up to a wire permutation.
    Wpa,
    /// Every nonzero signature is visited; the final basis is arbitrary.
    Spa,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Spa, Variant::Wpa, Variant::Npa];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Npa => "npa",
            Variant::Wpa => "wpa",
            Variant::Spa => "spa",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str().to_uppercase())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "npa" => Ok(Variant::Npa),
            "wpa" => Ok(Variant::Wpa),
            "spa" => Ok(Variant::Spa),
            other => Err(Error::Invalid(format!("unknown variant '{other}'"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VariantReport {
    pub variant: Variant,
    pub visited: Vec<SigVec>,
    pub missing: Vec<SigVec>,
    pub final_basis: Basis,
    /// `σ` with `v_k(len) = e_σ(k)`, when the final basis is a permuted standard basis.
    pub wire_permutation: Option<Vec<usize>>,
    pub pass: bool,
}

impl VariantReport {
    pub fn summary(&self) -> String {
        let perm = match &self.wire_permutation {
            Some(p) => format!("{p:?}"),
            None => "none".into(),
        };
        format!(
            "{}: {} (visited {}, missing {}, final permutation {perm})",
            self.variant,
            if self.pass { "pass" } else { "FAIL" },
            self.visited.len(),
            self.missing.len(),
        )
    }
}

pub fn check_variant(c: &Circuit, variant: Variant) -> VariantReport {
    let n = c.n();
    let mut seen = vec![false; 1 << n];
    let mut cur: Vec<u32> = (0..n).map(|k| 1u32 << k).collect();
    for &b in &cur {
        seen[b as usize] = true;
    }
    for (control, target) in c.cx_pairs() {
        cur[target] ^= cur[control];
        seen[cur[target] as usize] = true;
    }
    let visited = collect_flags(&seen, n, true);
    let missing = collect_flags(&seen, n, false);
    let final_basis = Basis::from_raw_unchecked(&cur);
    let wire_permutation = final_basis.as_permutation();
    let covered = missing.is_empty();
    let pass = match variant {
        Variant::Spa => covered,
        Variant::Wpa => covered && wire_permutation.is_some(),
        Variant::Npa => covered && final_basis.is_standard(),
    };
    VariantReport { variant, visited, missing, final_basis, wire_permutation, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Topology;
    use crate::reference;

    fn sv(s: &str) -> SigVec {
        SigVec::parse(s).unwrap()
    }

    /// Ket string written wire 0 first, e.g. "1011" means b_0=1, b_1=0, b_2=1, b_3=1.
    fn ket(s: &str) -> SigVec {
        let bits = s.chars().enumerate().fold(0u32, |acc, (k, ch)| acc | (u32::from(ch == '1') << k));
        SigVec::new(bits, s.len()).unwrap()
    }

    #[test]
    fn empty_circuit_trace() {
        let c = Circuit::new(3, Topology::Full).unwrap();
        let tr = simulate_signatures(&c);
        assert_eq!(tr.len(), 0);
        for k in 0..3 {
            assert_eq!(tr.get(k, 0), SigVec::unit(k, 3).unwrap());
        }
        assert_eq!(visited_signatures(&tr), vec![sv("001"), sv("010"), sv("100")]);
    }

    #[test]
    fn four_wire_example_final_signatures() {
        let c = reference::four_wire_example();
        let tr = simulate_signatures(&c);
        let fin: Vec<String> = tr.at(tr.len()).iter().map(|v| v.to_string()).collect();
        assert_eq!(fin, ["1101", "1110", "1100", "1000"]);
        assert_eq!(final_permutation(&c, ket("1011")).unwrap(), ket("1001"));
        assert_eq!(final_permutation(&c, ket("0010")).unwrap(), ket("1110"));
    }

    #[test]
    fn empty_circuit_permutation_is_identity() {
        let c = Circuit::new(4, Topology::Linear).unwrap();
        for b in 0..16 {
            let b = SigVec::new(b, 4).unwrap();
            assert_eq!(final_permutation(&c, b).unwrap(), b);
        }
    }

    #[test]
    fn small_reference_circuits_cover_everything() {
        for c in [reference::npa3(), reference::spa3()] {
            let tr = simulate_signatures(&c);
            assert_eq!(visited_signatures(&tr).len(), 7);
        }
    }

    #[test]
    fn variant_checks_on_reference_circuits() {
        let npa = reference::npa3();
        for v in Variant::ALL {
            assert!(check_variant(&npa, v).pass, "{v}");
        }
        let wpa = reference::wpa3();
        let r = check_variant(&wpa, Variant::Wpa);
        assert!(r.pass);
        assert_eq!(r.wire_permutation, Some(vec![1, 0, 2]));
        assert!(!check_variant(&wpa, Variant::Npa).pass);
        let spa = reference::spa3();
        let r = check_variant(&spa, Variant::Spa);
        assert!(r.pass);
        assert_eq!(r.final_basis.vectors(), &[sv("001"), sv("101"), sv("110")]);
        assert!(!check_variant(&spa, Variant::Wpa).pass);
        assert!(!check_variant(&spa, Variant::Npa).pass);
    }

    #[test]
    fn missing_signatures_are_reported() {
        let mut c = Circuit::new(2, Topology::Linear).unwrap();
        let r = check_variant(&c, Variant::Spa);
        assert!(!r.pass);
        assert_eq!(r.missing, vec![sv("11")]);
        c.cx(1, 0).unwrap();
        assert!(check_variant(&c, Variant::Spa).pass);
    }
}
