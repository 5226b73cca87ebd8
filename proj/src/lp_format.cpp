#include "riskrjt/lp_format.hpp"

#include <charconv>
#include <cmath>

namespace riskrjt {

namespace {

constexpr std::size_t kWrap = 200;

class LineWriter {
public:
    explicit LineWriter(std::string& out) : out_(out) {}

    void start(const std::string& head) {
        out_ += head;
        width_ = head.size();
    }
    void token(const std::string& tok) {
        if (width_ + tok.size() + 1 > kWrap) {
            out_ += "\n  ";
            width_ = 2;
        }
        out_ += ' ';
        out_ += tok;
        width_ += tok.size() + 1;
    }
    void end(const std::string& comment = {}) {
        if (!comment.empty()) out_ += " \\ " + comment;
        out_ += '\n';
    }

private:
    std::string& out_;
    std::size_t width_ = 0;
};

void write_terms(LineWriter& w, const MipModel& m, std::span<const Term> terms) {
    bool first = true;
    for (const auto& t : terms) {
        const std::string& name = m.variable(t.var).name;
        const double mag = std::abs(t.coef);
        std::string tok;
        if (t.coef < 0) {
            tok = "- ";
        } else if (!first) {
            tok = "+ ";
        }
        if (mag != 1.0) tok += format_number(mag) + " ";
        tok += name;
        w.token(tok);
        first = false;
    }
}

}  // namespace

std::string format_number(double v) {
    if (v == 0.0) return "0";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string export_lp(const MipModel& model) {
    std::string out;
    LineWriter w(out);
    out += "Maximize\n";
    w.start(" obj:");
    write_terms(w, model, model.objective());
    w.end();

    out += "Subject To\n";
    const auto rows = model.constraints();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        w.start(" c" + std::to_string(r + 1) + ":");
        if (row.indicator) {
            w.token(model.variable(row.indicator->binary).name);
            w.token("= " + std::to_string(row.indicator->value) + " ->");
        }
        if (row.terms.empty() && !model.variables().empty()) {
            w.token("0 " + model.variables().front().name);
        } else {
            write_terms(w, model, row.terms);
        }
        w.token(std::string(to_string(row.sense)) + " " + format_number(row.rhs));
        w.end(row.tag);
    }

    out += "Bounds\n";
    bool any_binary = false;
    for (const auto& v : model.variables()) {
        switch (v.domain) {
            case Domain::Binary:
                any_binary = true;
                break;
            case Domain::Free:
                out += " " + v.name + " free\n";
                break;
            case Domain::Continuous:
                out += " " + format_number(v.lower) + " <= " + v.name + " <= " + format_number(v.upper) + "\n";
                break;
        }
    }
    if (any_binary) {
        out += "Binaries\n";
        for (const auto& v : model.variables()) {
            if (v.domain == Domain::Binary) out += " " + v.name + "\n";
        }
    }
    out += "End\n";
    return out;
}

}  // namespace riskrjt
