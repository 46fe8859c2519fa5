#include "symlab/fld_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace symlab {

namespace {

static_assert(sizeof(double) == 8, "FLD1 payload assumes 64-bit doubles");

void byteswap_if_needed(std::vector<double>& v) {
    if constexpr (std::endian::native == std::endian::little) {
        (void)v;
    } else {
        for (double& d : v) {
            std::uint64_t bits;
            std::memcpy(&bits, &d, 8);
            bits = __builtin_bswap64(bits);
            std::memcpy(&d, &bits, 8);
        }
    }
}

}  // namespace

void write_fld(const std::string& path, const GridField& field, const FldExtra& extra) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("write_fld: cannot open " + path);
    const GridSpec& s = field.spec();
    out.precision(17);
    out << "FLD1\n";
    out << "dim " << field.dim() << "\n";
    out << "shape " << s.shape[0] << " " << s.shape[1] << " " << s.shape[2] << "\n";
    out << "origin " << s.origin.x << " " << s.origin.y << " " << s.origin.z << "\n";
    out << "spacing " << s.spacing << "\n";
    if (field.tail())
        out << "tail " << field.tail()->coefficient << " " << field.tail()->exponent << "\n";
    if (extra.excluded_radius)
        out << "excluded_radius " << *extra.excluded_radius << "\n";
    out << "\n";
    std::vector<double> payload = field.values();
    byteswap_if_needed(payload);
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * 8));
    if (!out) throw FormatError("write_fld: short write to " + path);
}

GridField read_fld(const std::string& path, FldExtra* extra) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("read_fld: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "FLD1")
        throw FormatError("read_fld: missing FLD1 magic in " + path);

    GridSpec spec;
    int dim = 0;
    std::optional<DecayEnvelope> tail;
    bool have_shape = false, have_spacing = false;
    while (std::getline(in, line)) {
        if (line.empty()) break;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dim") {
            ls >> dim;
        } else if (key == "shape") {
            ls >> spec.shape[0] >> spec.shape[1] >> spec.shape[2];
            have_shape = true;
        } else if (key == "origin") {
            ls >> spec.origin.x >> spec.origin.y >> spec.origin.z;
        } else if (key == "spacing") {
            ls >> spec.spacing;
            have_spacing = true;
        } else if (key == "tail") {
            DecayEnvelope env;
            ls >> env.coefficient >> env.exponent;
            tail = env;
        } else if (key == "excluded_radius") {
            double r;
            ls >> r;
            if (extra) extra->excluded_radius = r;
        } else {
            throw FormatError("read_fld: unknown header key '" + key + "' in " + path);
        }
        if (ls.fail()) throw FormatError("read_fld: malformed header line '" + line + "'");
    }
    if (dim != 3) throw FormatError("read_fld: only dim 3 grids are supported");
    if (!have_shape || !have_spacing) throw FormatError("read_fld: incomplete header in " + path);

    GridSpec tmp = spec;
    std::size_t count = tmp.size();
    std::vector<double> payload(count);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(count * 8));
    if (static_cast<std::size_t>(in.gcount()) != count * 8)
        throw FormatError("read_fld: payload shorter than shape requires");
    char probe;
    if (in.read(&probe, 1))
        throw FormatError("read_fld: payload longer than shape requires");
    byteswap_if_needed(payload);
    if (tail) tail->valid_radius = tmp.tail_split_radius(tail->center);
    return GridField(spec, std::move(payload), tail);
}

}  // namespace symlab
