#include "csn/graph_io.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace csn {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string xml_unescape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out.push_back(s[i]);
            continue;
        }
        const auto end = s.find(';', i);
        const std::string ent = s.substr(i, end - i + 1);
        if (ent == "&amp;") out.push_back('&');
        else if (ent == "&lt;") out.push_back('<');
        else if (ent == "&gt;") out.push_back('>');
        else if (ent == "&quot;") out.push_back('"');
        else if (ent == "&apos;") out.push_back('\'');
        else throw std::runtime_error("bad XML entity: " + ent);
        i = end;
    }
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

// Pulls attribute `name="value"` out of a tag line.
std::string attr(const std::string& line, const std::string& name) {
    const std::string key = name + "=\"";
    const auto pos = line.find(key);
    if (pos == std::string::npos)
        throw std::runtime_error("missing attribute " + name + " in: " + line);
    const auto end = line.find('"', pos + key.size());
    return line.substr(pos + key.size(), end - pos - key.size());
}

}  // namespace

void write_edge_list(const SharingNetwork& net, std::ostream& out) {
    out << "from\tto\tweight\n";
    for (const auto& [e, w] : net.edges)
        out << e.first << "\t" << e.second << "\t" << w << "\n";
}

SharingNetwork read_edge_list(std::istream& in) {
    SharingNetwork net;
    std::set<std::string> nodes;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (lineno == 1 && line.rfind("from\t", 0) == 0)) continue;
        std::stringstream ss(line);
        std::string from, to, weight;
        if (!std::getline(ss, from, '\t') || !std::getline(ss, to, '\t') ||
            !std::getline(ss, weight, '\t'))
            throw std::runtime_error("malformed edge list line " +
                                     std::to_string(lineno));
        net.edges[{from, to}] = std::stoull(weight);
        nodes.insert(from);
        nodes.insert(to);
    }
    net.nodes.assign(nodes.begin(), nodes.end());
    return net;
}

void write_gexf(const SharingNetwork& net, std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n"
        << "  <graph defaultedgetype=\"directed\">\n"
        << "    <nodes>\n";
    for (const std::string& n : net.nodes)
        out << "      <node id=\"" << xml_escape(n) << "\" label=\""
            << xml_escape(n) << "\" />\n";
    out << "    </nodes>\n    <edges>\n";
    std::size_t id = 0;
    for (const auto& [e, w] : net.edges)
        out << "      <edge id=\"" << id++ << "\" source=\"" << xml_escape(e.first)
            << "\" target=\"" << xml_escape(e.second) << "\" weight=\"" << w
            << "\" />\n";
    out << "    </edges>\n  </graph>\n</gexf>\n";
}

SharingNetwork read_gexf(std::istream& in) {
    SharingNetwork net;
    std::set<std::string> nodes;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("<node ") != std::string::npos) {
            nodes.insert(xml_unescape(attr(line, "id")));
        } else if (line.find("<edge ") != std::string::npos) {
            const std::string from = xml_unescape(attr(line, "source"));
            const std::string to = xml_unescape(attr(line, "target"));
            net.edges[{from, to}] = std::stoull(attr(line, "weight"));
        }
    }
    net.nodes.assign(nodes.begin(), nodes.end());
    return net;
}

void write_dot(const SharingNetwork& net, std::ostream& out) {
    out << "digraph sharing {\n";
    for (const std::string& n : net.nodes)
        out << "  \"" << dot_escape(n) << "\";\n";
    for (const auto& [e, w] : net.edges)
        out << "  \"" << dot_escape(e.first) << "\" -> \"" << dot_escape(e.second)
            << "\" [weight=" << w << ", label=\"" << w << "\"];\n";
    out << "}\n";
}

void write_community_matrix(const CommunityGraph& cg, std::ostream& out) {
    out << "community";
    for (const auto& [label, count] : cg.member_counts) out << "\tC" << label;
    out << "\n";
    for (const auto& [from, count_f] : cg.member_counts) {
        out << "C" << from;
        for (const auto& [to, count_t] : cg.member_counts) {
            const auto it = cg.edges.find({from, to});
            out << "\t" << (it != cg.edges.end() ? it->second : 0);
        }
        out << "\n";
    }
}

void write_community_dot(const CommunityGraph& cg, std::ostream& out) {
    out << "digraph communities {\n";
    for (const auto& [label, count] : cg.member_counts)
        out << "  C" << label << " [label=\"C" << label << " (" << count
            << " sources)\"];\n";
    for (const auto& [e, w] : cg.edges)
        out << "  C" << e.first << " -> C" << e.second << " [label=\"" << w
            << "\"];\n";
    out << "}\n";
}

void write_community_gexf(const CommunityGraph& cg, std::ostream& out) {
    SharingNetwork as_net;
    std::set<std::string> nodes;
    for (const auto& [label, count] : cg.member_counts)
        nodes.insert("C" + std::to_string(label));
    for (const auto& [e, w] : cg.edges)
        as_net.edges[{"C" + std::to_string(e.first),
                      "C" + std::to_string(e.second)}] = w;
    as_net.nodes.assign(nodes.begin(), nodes.end());
    write_gexf(as_net, out);
}

void export_network(const SharingNetwork& net, const std::string& format,
                    std::ostream& out) {
    if (format == "edgelist")
        write_edge_list(net, out);
    else if (format == "gexf")
        write_gexf(net, out);
    else if (format == "dot")
        write_dot(net, out);
    else
        throw std::invalid_argument("unsupported network format: " + format);
}

}  // namespace csn
