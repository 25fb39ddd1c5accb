#include "gfl/csv.hpp"

#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gfl/trajectory.hpp"

namespace gfl {

namespace {

constexpr const char* kHeader =
    "t_s,v_C1_V,v_C1_ref_V,i_L_alpha_A,i_L_beta_A,v_C2_alpha_V,v_C2_beta_V,"
    "i_g_alpha_A,i_g_beta_A,v_g_alpha_V,v_g_beta_V,mu_a,mu_b,mu_c,"
    "p_i_W,p_W,q_var,e1_re_J,e1_im_J,e2_re_W,e2_im_W,"
    "e3_re_W_per_s,e3_im_W_per_s,w_re_W_per_s2,w_im_W_per_s2,"
    "y_re_J_s,y_im_J_s,guard_flags";

constexpr int kColumns = 28;

void put(std::ostream& os, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, res.ptr - buf);
}

}  // namespace

const char* csv_header() { return kHeader; }

void write_csv(std::ostream& os, const TimeSeriesRecord& rec) {
    os << kHeader << '\n';
    for (size_t i = 0; i < rec.size(); ++i) {
        put(os, rec.t[i]); os << ',';
        put(os, rec.v_C1[i]); os << ',';
        put(os, rec.v_C1_ref[i]); os << ',';
        put(os, rec.i_L[i].real()); os << ',';
        put(os, rec.i_L[i].imag()); os << ',';
        put(os, rec.v_C2[i].real()); os << ',';
        put(os, rec.v_C2[i].imag()); os << ',';
        put(os, rec.i_g[i].real()); os << ',';
        put(os, rec.i_g[i].imag()); os << ',';
        put(os, rec.v_g[i].real()); os << ',';
        put(os, rec.v_g[i].imag()); os << ',';
        put(os, rec.mu_abc[i].a); os << ',';
        put(os, rec.mu_abc[i].b); os << ',';
        put(os, rec.mu_abc[i].c); os << ',';
        put(os, rec.p_i[i]); os << ',';
        put(os, rec.p[i]); os << ',';
        put(os, rec.q[i]); os << ',';
        put(os, rec.e1[i].real()); os << ',';
        put(os, rec.e1[i].imag()); os << ',';
        put(os, rec.e2[i].real()); os << ',';
        put(os, rec.e2[i].imag()); os << ',';
        put(os, rec.e3[i].real()); os << ',';
        put(os, rec.e3[i].imag()); os << ',';
        put(os, rec.w[i].real()); os << ',';
        put(os, rec.w[i].imag()); os << ',';
        put(os, rec.y[i].real()); os << ',';
        put(os, rec.y[i].imag()); os << ',';
        os << rec.guard_flags[i] << '\n';
    }
}

TimeSeriesRecord read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kHeader) {
        throw ConfigError("CSV header does not match the expected schema");
    }
    TimeSeriesRecord rec;
    size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> f;
        f.reserve(kColumns);
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p <= end) {
            const char* comma = p;
            while (comma < end && *comma != ',') ++comma;
            double v = 0.0;
            const auto res = std::from_chars(p, comma, v);
            if (res.ec != std::errc() || res.ptr != comma) {
                std::ostringstream os;
                os << "CSV line " << line_no << ": bad number";
                throw ConfigError(os.str());
            }
            f.push_back(v);
            if (comma == end) break;
            p = comma + 1;
        }
        if (f.size() != kColumns) {
            std::ostringstream os;
            os << "CSV line " << line_no << ": expected " << kColumns
               << " columns, got " << f.size();
            throw ConfigError(os.str());
        }
        rec.t.push_back(f[0]);
        rec.v_C1.push_back(f[1]);
        rec.v_C1_ref.push_back(f[2]);
        rec.i_L.push_back({f[3], f[4]});
        rec.v_C2.push_back({f[5], f[6]});
        rec.i_g.push_back({f[7], f[8]});
        rec.v_g.push_back({f[9], f[10]});
        rec.mu_abc.push_back({f[11], f[12], f[13]});
        rec.p_i.push_back(f[14]);
        rec.p.push_back(f[15]);
        rec.q.push_back(f[16]);
        rec.e1.push_back({f[17], f[18]});
        rec.e2.push_back({f[19], f[20]});
        rec.e3.push_back({f[21], f[22]});
        rec.w.push_back({f[23], f[24]});
        rec.y.push_back({f[25], f[26]});
        rec.guard_flags.push_back(static_cast<long>(f[27]));
    }
    return rec;
}

}  // namespace gfl
