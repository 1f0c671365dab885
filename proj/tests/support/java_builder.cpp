#include "java_builder.hpp"

#include <sstream>
#include <stdexcept>

namespace testsupport {

int min_mloc(const MethodSpec& spec) {
    return spec.lvar + 2 * (spec.nbd - 1) + (spec.vg - spec.nbd);
}

std::string build_method(const MethodSpec& spec, int indent) {
    if (spec.nbd < 1 || spec.vg < spec.nbd || spec.par < 0 || spec.lvar < 0)
        throw std::invalid_argument("inconsistent method spec for " + spec.name);
    if (spec.mloc < min_mloc(spec))
        throw std::invalid_argument("mloc too small for structure of " + spec.name);

    const std::string ind(static_cast<std::size_t>(indent), ' ');
    const std::string inner(static_cast<std::size_t>(indent) + 4, ' ');

    // Condition operand: a local if any, else a parameter, else a literal.
    const std::string cond = spec.lvar > 0 ? "v1" : (spec.par > 0 ? "p1" : "9");

    std::ostringstream os;
    os << ind << "void " << spec.name << "(";
    for (int p = 1; p <= spec.par; ++p) os << (p > 1 ? ", " : "") << "int p" << p;
    os << ") {";
    if (spec.mloc == 0) {
        os << "}\n";
        return os.str();
    }
    os << "\n";

    for (int v = 1; v <= spec.lvar; ++v) os << inner << "int v" << v << " = 0;\n";

    const int chain = spec.nbd - 1;
    for (int c = 0; c < chain; ++c) os << inner << "if (" << cond << " == " << c << ") {\n";
    for (int c = 0; c < chain; ++c) os << inner << "}\n";

    const bool has_var = spec.lvar > 0 || spec.par > 0;
    for (int k = 0; k < spec.vg - spec.nbd; ++k)
        os << inner << "if (" << cond << " == " << (100 + k) << ") return;\n";

    const int filler = spec.mloc - min_mloc(spec);
    for (int f = 0; f < filler; ++f) {
        if (has_var)
            os << inner << cond << " = " << cond << " + 0;\n";
        else
            os << inner << ";\n";
    }

    os << ind << "}\n";
    return os.str();
}

std::string build_class(const std::string& package, const std::string& class_name,
                        const std::vector<MethodSpec>& methods) {
    std::ostringstream os;
    if (!package.empty()) os << "package " << package << ";\n\n";
    os << "public class " << class_name << " {\n";
    for (const MethodSpec& spec : methods) os << build_method(spec) << "\n";
    os << "}\n";
    return os.str();
}

}  // namespace testsupport
