//! Short descriptions of what each derive kind constructs.

use crate::derive::Kind;

pub fn explain(kind: Kind) -> &'static str {
    match kind {
        Kind::PathObj => "\
pathobj: the path object of a type A over a context G.
  P = [G, x : A, y : A, u : Id A x y], with r = (x, x, refl A x) and s, t the
  two projections. Checks that (s, t) r is the diagonal and that s and t agree
  on G. Rules: Id formation and refl introduction.",
        Kind::Sym => "\
sym: symmetry of paths.
  sigma := J (x y u. Id A y x) (x. refl A x) x y u [], a J with trivial Δ
  (an empty parameter telescope). The H witness of the same motive gives
  sigma(refl) ~ refl. Rules: J elimination and its propositional computation H.",
        Kind::Trans => "\
trans: composition of paths.
  mu := J over the second path v : Id A y z with the Δ-parameter
  (x0 : A)(u0 : Id A x0 y) carrying the first path; the branch returns u0.
  H gives the unit law mu(u, refl) ~ u. Without function types the
  Δ-parameter is what lets J see the first path.",
        Kind::Transport => "\
transport: moving a fibre along a path in the base.
  For [G, x : A, Theta] -> [G, x : A], Gamma := J (x0 x1 a | Theta(x0). Theta(x1))
  (x0. theta0) x0 x1 a [theta], with the fibre passed through the
  Δ-parameter. Checks f Gamma = t p2 and the coherence Gamma(1, r f) ~ 1
  from H. Higher rank fibres transport entry by entry.",
        Kind::Groupoid => "\
groupoid: the five groupoid laws of paths in A, as fibrewise homotopies:
  associativity, both unit laws and both inverse laws of mu and sigma. Each is
  built by path induction (J fill against r) and cancellation of r, and
  re-checked with its endpoints.",
        Kind::Py => "\
py: the path structure of a telescope Y of any rank, by rank induction.
  Rank 0 is trivial. For (x : A) followed by Theta', build the structure of
  Theta' over x recursively, transport Theta' along paths in A, and take
  PY = [x0, theta0, x1, theta1, alpha : Id A x0 x1, E'(Gamma(theta0, alpha), theta1)].
  Reflexivity, symmetry and transitivity come with it, and the three
  equivalence relation equations are confirmed.",
        Kind::Contract => "\
contract: the source map s : PY -> Y is contractible.
  Emits the section c = r with p c = 1, a fibrewise homotopy 1 ~ c p, and a
  section L of the path object of s with (s, t) L = 1, assembled by pasting
  the rank induction.",
        Kind::Similar => "\
similar: comparison maps between two equivalence relations on Y.
  With strong sums, PY from the rank induction is compared with the path
  object of the Sigma-collapsed type, pulled back along the collapse; without
  them, the rank 1 path object is compared with PY. Emits H and K with
  q H = p and p K = q, built by path induction on the relation of origin.",
        Kind::Fill => "\
fill: a lifting problem solved by J.
  The square with left leg r : A -> PA, right leg (s, t) : PA -> A x A, top r
  and bottom (t, s) is filled by d : PA -> PA with (s, t) d = (t, s), plus a
  homotopy r ~ d r from the H witness.",
        Kind::TwoSix => "\
twosix: homotopy equivalences satisfy 2-out-of-6.
  Given witnesses that g f and h g are homotopy equivalences, emits inverses
  and unit and counit homotopies for f, g, h and h g f, assembled from
  whiskering, symmetry and composition of homotopies. The command line
  instance uses the Sigma-collapse isomorphism when strong sums are on and
  identities otherwise.",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explanations_mention_their_mechanism() {
        assert!(explain(Kind::Py).contains("rank induction"));
        assert!(explain(Kind::Sym).contains("J with trivial Δ"));
        assert!(explain(Kind::Transport).contains("Δ-parameter"));
        for k in Kind::ALL {
            assert!(explain(k).starts_with(k.name()));
        }
    }
}
