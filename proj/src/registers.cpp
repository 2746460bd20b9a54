#include "mexcheck/registers.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

using namespace std;

namespace mex {

RegStatus initial_status(const RegisterConfig &cfg, int nthreads) {
    RegStatus s;
    s.stor = (uint8_t)cfg.init;
    s.rec.fill(-1);
    for (int t = 0; t < nthreads; t++)
        s.rec[t] = (int8_t)cfg.init;
    return s;
}

RegStatus apply_update(const RegStatus &s, const Action &a, int payload,
                       const RegisterConfig &cfg, int nthreads) {
    if (a.reg != cfg.id)
        throw invalid_argument("apply_update: wrong register");
    RegStatus n = s;
    uint8_t bit = (uint8_t)(1u << a.thread);
    switch (a.kind) {
    case Kind::StartRead: { // usr
        n.rds |= bit;
        n.pend |= bit;
        n.ovrl = (uint8_t)((n.ovrl & ~bit) | (s.wrts ? bit : 0));
        uint16_t pv = (uint16_t)(1u << s.stor);
        for (int t = 0; t < nthreads; t++)
            if ((s.wrts >> t) & 1)
                pv |= (uint16_t)(1u << s.rec[t]);
        n.posv[a.thread] = pv;
        break;
    }
    case Kind::FinishRead: // ufr
        n.rds &= ~bit;
        break;
    case Kind::StartWrite: { // usw
        n.wrts |= bit;
        n.pend |= bit;
        n.rec[a.thread] = (int8_t)payload;
        n.ovrl = (uint8_t)((n.ovrl & ~bit) | (s.wrts ? bit : 0));
        for (int t = 0; t < nthreads; t++) {
            if (t == a.thread)
                continue;
            n.ovrl |= (uint8_t)(1u << t);
            n.posv[t] |= (uint16_t)(1u << payload);
        }
        break;
    }
    case Kind::FinishWrite: // ufw(s, t, payload)
        n.stor = (uint8_t)payload;
        n.wrts &= ~bit;
        break;
    case Kind::OrderRead: // uor
        n.pend &= ~bit;
        n.rec[a.thread] = (int8_t)s.stor;
        break;
    case Kind::OrderWrite: // uow(s, t, payload)
        n.stor = (uint8_t)payload;
        n.pend &= ~bit;
        break;
    case Kind::InstantRead: // urd: no change
        break;
    default:
        throw invalid_argument("apply_update: not a register action");
    }
    return n;
}

RegStatus canonicalize(const RegStatus &s, const RegisterConfig &cfg,
                       int nthreads) {
    RegStatus n = s;
    if (cfg.style == RegStyle::InstantRead)
        n.rds = 0;
    switch (cfg.kind) {
    case RegKind::Safe:
        n.pend = 0;
        n.ovrl &= (uint8_t)(n.rds | n.wrts);
        for (int t = 0; t < kMaxThreads; t++) {
            bool keep = ((n.wrts >> t) & 1) && !((n.ovrl >> t) & 1);
            if (!keep)
                n.rec[t] = -1;
            n.posv[t] = 0;
        }
        break;
    case RegKind::Regular:
        n.ovrl = 0;
        n.pend &= n.wrts;
        for (int t = 0; t < kMaxThreads; t++) {
            if (!((n.wrts >> t) & 1))
                n.rec[t] = -1;
            if (!((n.rds >> t) & 1))
                n.posv[t] = 0;
        }
        break;
    case RegKind::Atomic:
        n.ovrl = 0;
        n.pend &= (uint8_t)(n.rds | n.wrts);
        for (int t = 0; t < kMaxThreads; t++) {
            bool pending = (n.pend >> t) & 1;
            bool keep = (((n.rds >> t) & 1) && !pending) ||
                        (((n.wrts >> t) & 1) && pending);
            if (!keep)
                n.rec[t] = -1;
            n.posv[t] = 0;
        }
        break;
    }
    return n;
}

namespace {

Action mk(Kind k, int t, int reg, int value = -1) {
    Action a;
    a.kind = k;
    a.thread = (int8_t)t;
    a.reg = (int16_t)reg;
    a.value = (int16_t)value;
    return a;
}

} // namespace

vector<RegStep> register_steps(const RegStatus &s, const RegisterConfig &cfg,
                               int nthreads) {
    vector<RegStep> out;
    int D = cfg.domain;
    uint8_t busy = (uint8_t)(s.rds | s.wrts);
    auto sr_ok = [&](int t) {
        if ((busy >> t) & 1)
            return false;
        switch (cfg.blocking) {
        case Blocking::None: return true;
        case Blocking::BlockAll: return busy == 0;
        default: return s.wrts == 0;
        }
    };
    auto sw_ok = [&](int t) {
        if ((busy >> t) & 1)
            return false;
        switch (cfg.blocking) {
        case Blocking::None: return true;
        case Blocking::BlockWritesOnly: return s.wrts == 0;
        default: return busy == 0;
        }
    };

    for (int t = 0; t < nthreads; t++) {
        bool reading = (s.rds >> t) & 1;
        bool writing = (s.wrts >> t) & 1;
        bool pending = (s.pend >> t) & 1;
        bool overlapped = (s.ovrl >> t) & 1;

        if (cfg.style == RegStyle::FullRead) {
            if (sr_ok(t))
                out.push_back({mk(Kind::StartRead, t, cfg.id), -1});
            if (reading) {
                switch (cfg.kind) {
                case RegKind::Safe:
                    if (!overlapped) {
                        out.push_back(
                            {mk(Kind::FinishRead, t, cfg.id, s.stor), -1});
                    } else {
                        for (int d = 0; d < D; d++)
                            out.push_back(
                                {mk(Kind::FinishRead, t, cfg.id, d), -1});
                    }
                    break;
                case RegKind::Regular:
                    for (int d = 0; d < D; d++)
                        if ((s.posv[t] >> d) & 1)
                            out.push_back(
                                {mk(Kind::FinishRead, t, cfg.id, d), -1});
                    break;
                case RegKind::Atomic:
                    if (pending)
                        out.push_back({mk(Kind::OrderRead, t, cfg.id), -1});
                    else
                        out.push_back(
                            {mk(Kind::FinishRead, t, cfg.id, s.rec[t]), -1});
                    break;
                }
            }
        } else {
            if (!writing) {
                switch (cfg.kind) {
                case RegKind::Safe:
                    if (s.wrts == 0) {
                        out.push_back(
                            {mk(Kind::InstantRead, t, cfg.id, s.stor), -1});
                    } else {
                        for (int d = 0; d < D; d++)
                            out.push_back(
                                {mk(Kind::InstantRead, t, cfg.id, d), -1});
                    }
                    break;
                case RegKind::Regular: {
                    uint16_t pv = (uint16_t)(1u << s.stor);
                    for (int t2 = 0; t2 < nthreads; t2++)
                        if ((s.wrts >> t2) & 1)
                            pv |= (uint16_t)(1u << s.rec[t2]);
                    for (int d = 0; d < D; d++)
                        if ((pv >> d) & 1)
                            out.push_back(
                                {mk(Kind::InstantRead, t, cfg.id, d), -1});
                    break;
                }
                case RegKind::Atomic:
                    out.push_back(
                        {mk(Kind::InstantRead, t, cfg.id, s.stor), -1});
                    break;
                }
            }
        }

        if (cfg.style == RegStyle::FullRead ? sw_ok(t) : !writing) {
            for (int d = 0; d < D; d++)
                out.push_back({mk(Kind::StartWrite, t, cfg.id, d), d});
        }

        if (writing) {
            switch (cfg.kind) {
            case RegKind::Safe:
                if (!overlapped) {
                    out.push_back({mk(Kind::FinishWrite, t, cfg.id), s.rec[t]});
                } else {
                    for (int d = 0; d < D; d++)
                        out.push_back({mk(Kind::FinishWrite, t, cfg.id), d});
                }
                break;
            case RegKind::Regular:
            case RegKind::Atomic:
                if (pending)
                    out.push_back({mk(Kind::OrderWrite, t, cfg.id), s.rec[t]});
                else
                    out.push_back({mk(Kind::FinishWrite, t, cfg.id), s.stor});
                break;
            }
        }
    }
    return out;
}

Lts register_lts(const RegisterConfig &cfg, int nthreads, ActionTable &tab,
                 vector<RegStatus> *statuses) {
    if (cfg.domain < 1 || cfg.domain > kMaxDomain)
        throw invalid_argument("register domain out of range");
    if (cfg.init < 0 || cfg.init >= cfg.domain)
        throw invalid_argument("register init out of domain");
    if (nthreads < 1 || nthreads > kMaxThreads)
        throw invalid_argument("thread count out of range");
    if (cfg.blocking != Blocking::None &&
        (cfg.kind != RegKind::Atomic || cfg.style != RegStyle::FullRead))
        throw invalid_argument(
            "blocking variants exist only for full-read atomic registers");

    Lts out;
    out.tab = &tab;

    // full interface alphabet, interned in a fixed order
    for (int t = 0; t < nthreads; t++) {
        if (cfg.style == RegStyle::FullRead) {
            out.alphabet.push_back(tab.intern(mk(Kind::StartRead, t, cfg.id)));
            for (int d = 0; d < cfg.domain; d++)
                out.alphabet.push_back(
                    tab.intern(mk(Kind::FinishRead, t, cfg.id, d)));
            if (cfg.kind == RegKind::Atomic)
                out.alphabet.push_back(
                    tab.intern(mk(Kind::OrderRead, t, cfg.id)));
        } else {
            for (int d = 0; d < cfg.domain; d++)
                out.alphabet.push_back(
                    tab.intern(mk(Kind::InstantRead, t, cfg.id, d)));
        }
        for (int d = 0; d < cfg.domain; d++)
            out.alphabet.push_back(
                tab.intern(mk(Kind::StartWrite, t, cfg.id, d)));
        if (cfg.kind != RegKind::Safe)
            out.alphabet.push_back(tab.intern(mk(Kind::OrderWrite, t, cfg.id)));
        out.alphabet.push_back(tab.intern(mk(Kind::FinishWrite, t, cfg.id)));
    }

    map<RegStatus, int> index;
    vector<RegStatus> order;
    RegStatus init = canonicalize(initial_status(cfg, nthreads), cfg, nthreads);
    index[init] = 0;
    order.push_back(init);
    out.init = 0;
    for (size_t head = 0; head < order.size(); head++) {
        RegStatus s = order[head]; // copy: order may reallocate
        out.trans.emplace_back();
        for (const RegStep &st : register_steps(s, cfg, nthreads)) {
            RegStatus ns = canonicalize(
                apply_update(s, st.action, st.payload, cfg, nthreads), cfg,
                nthreads);
            auto [it, fresh] = index.emplace(ns, (int)order.size());
            if (fresh)
                order.push_back(ns);
            out.trans[head].emplace_back(tab.intern(st.action), it->second);
        }
    }
    out.sort_all();
    if (statuses)
        *statuses = order;
    return out;
}

} // namespace mex
