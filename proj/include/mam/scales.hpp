#pragma once

namespace mam {

/// Valence/arousal pair on the 5-point range shared by PAM and MAM.
struct VAScore {
    double valence = 3.0;
    double arousal = 3.0;

    bool in_range() const { return valence >= 1.0 && valence <= 5.0 && arousal >= 1.0 && arousal <= 5.0; }
    bool operator==(const VAScore&) const = default;
};

VAScore make_va(double valence, double arousal);

/// Affine rescale of a 9-point SAM score onto the 5-point range.
double sam9_to_5(double x);

/// Inverse of sam9_to_5.
double five_to_sam9(double y);

/// Centers a 1..9 score on its neutral midpoint (5 -> 0).
double center_deap(double x);

} // namespace mam
