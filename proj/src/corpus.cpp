namespace opforms {}
