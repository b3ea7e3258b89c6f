# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17
