# this_file: tests/__init__.py
