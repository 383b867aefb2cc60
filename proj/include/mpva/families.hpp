#ifndef MPVA_FAMILIES_HPP
#define MPVA_FAMILIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "mpva/hamops.hpp"

namespace mpva {

enum class FamilyTag {
    General,        // f_k = c_k g(u) g(u_k)
    Complementary,  // eps^{N-1} = -1 ladder of F_j's
    TypeIII,        // complementary-N + t * general-1, N = 2 or 3
    TypeIV,         // complementary-2 + t * order-4 bracket with F^{-1} rungs
    TypeV,          // 2-stretched complementary-2 + t * 2-stretched general-1
    TypeVI,         // c-deformed complementary of order 4, eps^3 = -1, eps != -1
    TypeVII,        // order-2 general + t * order-5 bracket, eps^3 = 1 primitive
    TypeVIII,       // order-5 bracket with gF' = F and constant c
    FTV,            // Faddeev-Takhtajan-Volkov combination, g = F = u
    TwistedOrder2,  // order-2 bracket with a shift-constant a, g dF/du = a F
    Thm81,          // order-3 bracket with gF' = aF, gG' = a eps G, eps^2 = -1
    Volterra,       // f_1 = u u_1 (unit coefficient)
};

FamilyTag family_tag_from_name(const std::string& name);
std::string family_tag_name(FamilyTag tag);

struct FamilySpec {
    FamilyTag tag;
    int order = 0;                      // used by General, Complementary, TypeIII
    std::optional<EpsSpec> eps;         // override where the tag allows a choice
    bool concrete_u = false;            // realize g (and F) as the variable u
    std::vector<std::string> params;    // custom parameter names, else defaults
};

// Exact modes of the cited classification display, with the constrained
// symbols registered on a fresh table (or on `reuse` when provided).
BracketStructure build_family(const FamilySpec& spec,
                              const SymbolTablePtr& reuse = nullptr);

// The n-stretched bracket: order nN, mode at n*j is dilate(f_j, n).
BracketStructure stretch(const BracketStructure& st, int n);

// The compatible (K1, H2) pair with a shift constant a and rule g dF/du = aF,
// plus the Lenard seeds; construction verifies K1 xi0 = 0 and K1 xi1 = H2 xi0.
struct TwistedPair {
    SymbolTablePtr tab;
    DiffOperator K1, H2;
    DiffExpr xi0, xi1;
    DiffExpr flow0;  // H2 xi0
    BracketStructure order1, order2;
};
TwistedPair twisted_pair(bool include_c = true);

}  // namespace mpva

#endif
