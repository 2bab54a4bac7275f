# boxcert