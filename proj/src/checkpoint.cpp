#include "tvmerge/checkpoint.hpp"

#include "tvmerge/errors.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>

namespace tvmerge {

namespace {

constexpr char k_magic[4] = {'T', 'V', 'C', 'K'};
constexpr std::uint16_t k_version = 1;

void put_u16(std::vector<std::uint8_t> & buf, std::uint16_t v) {
    buf.push_back(static_cast<std::uint8_t>(v & 0xff));
    buf.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t> & buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        buf.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
}

void put_bytes(std::vector<std::uint8_t> & buf, const void * p, std::size_t n) {
    const auto * b = static_cast<const std::uint8_t *>(p);
    buf.insert(buf.end(), b, b + n);
}

std::uint32_t crc_of(const std::uint8_t * data, std::size_t n) {
    return static_cast<std::uint32_t>(::crc32(0L, data, static_cast<uInt>(n)));
}

struct reader {
    const std::vector<std::uint8_t> & buf;
    std::size_t pos = 0;

    void need(std::size_t n, const char * what) {
        if (pos + n > buf.size()) {
            throw truncated_file(std::string("file ends while reading ") + what, pos);
        }
    }
    std::uint8_t u8(const char * what) {
        need(1, what);
        return buf[pos++];
    }
    std::uint16_t u16(const char * what) {
        need(2, what);
        std::uint16_t v = static_cast<std::uint16_t>(buf[pos]) |
                          static_cast<std::uint16_t>(buf[pos + 1]) << 8;
        pos += 2;
        return v;
    }
    std::uint32_t u32(const char * what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(buf[pos + i]) << (8 * i);
        }
        pos += 4;
        return v;
    }
    std::string str(std::size_t n, const char * what) {
        need(n, what);
        std::string s(reinterpret_cast<const char *>(buf.data() + pos), n);
        pos += n;
        return s;
    }
};

} // namespace

std::vector<std::uint8_t> encode_checkpoint(const param_set & p) {
    p.check_layers();
    std::vector<std::uint8_t> buf;
    put_bytes(buf, k_magic, 4);
    put_u16(buf, k_version);
    if (p.size() > 0xffffffffull) {
        throw invalid_argument("too many entries for TVCK");
    }
    put_u32(buf, static_cast<std::uint32_t>(p.size()));
    put_u32(buf, static_cast<std::uint32_t>(p.meta().size()));
    for (const auto & [key, value] : p.meta()) {
        if (key.size() > 0xffff) {
            throw invalid_argument("meta key too long: '" + key + "'");
        }
        put_u16(buf, static_cast<std::uint16_t>(key.size()));
        put_bytes(buf, key.data(), key.size());
        put_u32(buf, static_cast<std::uint32_t>(value.size()));
        put_bytes(buf, value.data(), value.size());
    }
    for (const auto & e : p.entries()) {
        if (e.name.size() > 0xffff) {
            throw invalid_argument("entry name too long: '" + e.name + "'");
        }
        if (e.layer_index > 0xffff) {
            throw invalid_argument("layer_index exceeds u16 range in '" + e.name + "'");
        }
        if (e.tens.shape.size() > 0xff) {
            throw invalid_argument("too many dims in '" + e.name + "'");
        }
        put_u16(buf, static_cast<std::uint16_t>(e.name.size()));
        put_bytes(buf, e.name.data(), e.name.size());
        put_u16(buf, static_cast<std::uint16_t>(e.layer_index));
        buf.push_back(0); // dtype f32
        buf.push_back(static_cast<std::uint8_t>(e.tens.shape.size()));
        for (std::uint32_t d : e.tens.shape) {
            put_u32(buf, d);
        }
        for (float f : e.tens.data) {
            put_u32(buf, std::bit_cast<std::uint32_t>(f));
        }
    }
    put_u32(buf, crc_of(buf.data(), buf.size()));
    return buf;
}

param_set decode_checkpoint(const std::vector<std::uint8_t> & bytes) {
    reader r{bytes};
    r.need(4, "magic");
    if (std::memcmp(bytes.data(), k_magic, 4) != 0) {
        throw bad_magic("expected 'TVCK'", 0);
    }
    r.pos = 4;
    std::uint16_t version = r.u16("version");
    if (version != k_version) {
        throw unsupported_version("version " + std::to_string(version), 4);
    }
    std::uint32_t n_entries = r.u32("entry count");
    std::uint32_t n_meta = r.u32("meta count");

    param_set p;
    for (std::uint32_t m = 0; m < n_meta; ++m) {
        std::uint16_t klen = r.u16("meta key length");
        std::string key = r.str(klen, "meta key");
        std::uint32_t vlen = r.u32("meta value length");
        p.meta()[key] = r.str(vlen, "meta value");
    }
    for (std::uint32_t i = 0; i < n_entries; ++i) {
        std::uint16_t nlen = r.u16("entry name length");
        std::string name = r.str(nlen, "entry name");
        std::uint16_t layer = r.u16("layer_index");
        std::uint8_t dtype = r.u8("dtype tag");
        if (dtype != 0) {
            throw unsupported_version("dtype tag " + std::to_string(dtype) + " in '" + name + "'",
                                      r.pos - 1);
        }
        std::uint8_t ndim = r.u8("ndim");
        std::vector<std::uint32_t> shape(ndim);
        std::size_t numel = 1;
        for (std::uint8_t d = 0; d < ndim; ++d) {
            shape[d] = r.u32("dim");
            numel *= shape[d];
        }
        std::vector<float> data(numel);
        for (std::size_t j = 0; j < numel; ++j) {
            data[j] = std::bit_cast<float>(r.u32("tensor payload"));
        }
        tensor t(std::move(shape), std::move(data));
        check_finite(t, "load '" + name + "'");
        p.add(std::move(name), layer, std::move(t));
    }

    std::size_t crc_offset = r.pos;
    std::uint32_t stored = r.u32("checksum");
    std::uint32_t computed = crc_of(bytes.data(), crc_offset);
    if (stored != computed) {
        throw checksum_mismatch("stored " + std::to_string(stored) + ", computed " +
                                std::to_string(computed), crc_offset);
    }
    if (r.pos != bytes.size()) {
        throw io_error("trailing bytes after checksum at offset " + std::to_string(r.pos));
    }
    p.check_layers();
    return p;
}

void save_checkpoint(const param_set & p, const std::string & path) {
    std::vector<std::uint8_t> buf = encode_checkpoint(p);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot open '" + path + "' for writing");
    }
    out.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) {
        throw io_error("write failed for '" + path + "'");
    }
}

param_set load_checkpoint(const std::string & path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) {
        throw io_error("cannot open '" + path + "' for reading");
    }
    std::streamsize size = in.tellg();
    in.seekg(0);
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(size));
    if (size > 0 && !in.read(reinterpret_cast<char *>(buf.data()), size)) {
        throw io_error("read failed for '" + path + "'");
    }
    return decode_checkpoint(buf);
}

} // namespace tvmerge
