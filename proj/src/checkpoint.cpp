#include "c2f/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace c2f {

static_assert(std::endian::native == std::endian::little,
              "checkpoint io assumes a little-endian host");

void save_checkpoint(const std::string& path, const ParamStore& store, std::uint64_t config_hash) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(config_hash));
    f << "c2f-checkpoint 1\n";
    f << "config " << hex << "\n";
    f << "tensors " << store.count() << "\n";
    for (const auto& [name, p] : store) {
        f << name << " " << p.value.shape.size();
        for (int d : p.value.shape) f << " " << d;
        f << "\n";
    }
    f << "data\n";
    for (const auto& [name, p] : store)
        f.write(reinterpret_cast<const char*>(p.value.data()),
                static_cast<std::streamsize>(p.value.size() * sizeof(double)));
    if (!f) throw std::runtime_error("short write on checkpoint: " + path);
}

CheckpointHeader load_checkpoint(const std::string& path, ParamStore& store) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string line;
    if (!std::getline(f, line) || line != "c2f-checkpoint 1")
        throw std::runtime_error("bad checkpoint magic in " + path);

    CheckpointHeader hdr;
    if (!std::getline(f, line)) throw std::runtime_error("truncated checkpoint header");
    {
        std::istringstream ss(line);
        std::string key, hex;
        ss >> key >> hex;
        if (key != "config") throw std::runtime_error("bad checkpoint header: " + line);
        hdr.config_hash = std::stoull(hex, nullptr, 16);
    }

    std::size_t count = 0;
    if (!std::getline(f, line)) throw std::runtime_error("truncated checkpoint header");
    {
        std::istringstream ss(line);
        std::string key;
        ss >> key >> count;
        if (key != "tensors") throw std::runtime_error("bad checkpoint header: " + line);
    }
    if (count != store.count())
        throw std::runtime_error("checkpoint tensor count mismatch: file has " +
                                 std::to_string(count) + ", model expects " +
                                 std::to_string(store.count()));

    std::vector<std::string> order;
    order.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(f, line)) throw std::runtime_error("truncated checkpoint manifest");
        std::istringstream ss(line);
        std::string name;
        std::size_t rank = 0;
        ss >> name >> rank;
        std::vector<int> shape(rank);
        for (auto& d : shape) ss >> d;
        if (!ss) throw std::runtime_error("bad manifest line: " + line);
        if (!store.has(name))
            throw std::runtime_error("checkpoint tensor '" + name + "' unknown to this model");
        if (store.value(name).shape != shape)
            throw std::runtime_error("checkpoint shape mismatch for '" + name + "': file " +
                                     shape_str(shape) + " vs model " +
                                     shape_str(store.value(name).shape));
        order.push_back(name);
    }
    if (!std::getline(f, line) || line != "data")
        throw std::runtime_error("missing data sentinel in " + path);

    for (const auto& name : order) {
        Tensor& t = store.value(name);
        f.read(reinterpret_cast<char*>(t.data()),
               static_cast<std::streamsize>(t.size() * sizeof(double)));
        if (!f) throw std::runtime_error("truncated tensor data for '" + name + "'");
    }
    return hdr;
}

}  // namespace c2f
